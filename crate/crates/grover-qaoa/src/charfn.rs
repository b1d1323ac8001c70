//! Characteristic functions of problem ensembles.
//!
//! The only property of a problem visible to a Grover-driven QAOA
//! expectation is the distribution of its objective values, represented
//! here by the characteristic function `Γ(t) = E[e^{itC}]` together with
//! its derivative `Γ'(t)`. Built-in variants cover the Gaussian ensemble
//! (random cost model), the unit-mean χ²₁ ensemble (number partitioning),
//! the exact empirical sum over a finite spectrum, and a mean-shifting
//! wrapper used to zero the ensemble mean.

use std::io::{BufRead, Write};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap on qubit counts for dense 2^n data.
pub const MAX_QUBITS: u32 = 26;

/// The 2^n objective values `C(z)` of one finite problem instance,
/// indexed by configuration `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    n: u32,
    values: Vec<f64>,
    mean: f64,
}

impl Spectrum {
    pub fn new(n: u32, values: Vec<f64>) -> Result<Self> {
        if n < 1 {
            return Err(Error::Domain("spectrum requires n >= 1".into()));
        }
        if n > MAX_QUBITS {
            return Err(Error::ResourceLimit(format!(
                "n = {n} exceeds the {MAX_QUBITS}-qubit cap"
            )));
        }
        if values.len() != 1usize << n {
            return Err(Error::Domain(format!(
                "spectrum for n = {n} must hold {} values, got {}",
                1usize << n,
                values.len()
            )));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::Domain("spectrum values must be finite".into()));
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        Ok(Self { n, values, mean })
    }

    pub fn qubits(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Arithmetic mean of the objective values (computed once at
    /// construction).
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Parses either the text format (`n=<int>` header followed by 2^n
    /// whitespace-separated values, `#` lines ignored) or the JSON form
    /// `{"n": <int>, "values": [...]}`. The format is detected from the
    /// first non-whitespace byte.
    pub fn read<R: BufRead>(mut reader: R) -> Result<Self> {
        let mut content = String::new();
        reader.read_to_string(&mut content)?;
        let trimmed = content.trim_start();
        if trimmed.starts_with('{') {
            let file: SpectrumFile = serde_json::from_str(trimmed)
                .map_err(|e| Error::Parse(format!("spectrum JSON: {e}")))?;
            return Spectrum::new(file.n, file.values);
        }
        let mut tokens = content
            .lines()
            .filter(|line| !line.trim_start().starts_with('#'))
            .flat_map(str::split_whitespace);
        let header = tokens
            .next()
            .ok_or_else(|| Error::Parse("empty spectrum file".into()))?;
        let n: u32 = header
            .strip_prefix("n=")
            .ok_or_else(|| Error::Parse(format!("expected `n=<int>` header, got `{header}`")))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad qubit count in header: {e}")))?;
        let values = tokens
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("bad spectrum value `{t}`: {e}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        Spectrum::new(n, values)
    }

    /// Writes the text format consumed by [`Spectrum::read`].
    pub fn write<W: Write>(&self, mut writer: W) -> Result<()> {
        writeln!(writer, "n={}", self.n)?;
        for chunk in self.values.chunks(8) {
            let line: Vec<String> = chunk.iter().map(|v| format!("{v:.17e}")).collect();
            writeln!(writer, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SpectrumFile {
    n: u32,
    values: Vec<f64>,
}

/// A problem ensemble represented purely through `Γ` and `Γ'`.
#[derive(Debug, Clone)]
pub enum CharacteristicFunction {
    /// Standard normal objective values: `Γ(t) = e^{-t²/2}`.
    Gaussian,
    /// χ² with one degree of freedom: `Γ(t) = (1 - 2it)^{-1/2}` on the
    /// principal branch. Unit mean.
    ChiSquareOne,
    /// Exact finite sum over one instance's spectrum.
    Empirical(Arc<Spectrum>),
    /// Inner ensemble with `shift` subtracted from the objective:
    /// `Γ(t) = e^{-itμ} Γ_in(t)`.
    MeanShifted {
        inner: Box<CharacteristicFunction>,
        shift: f64,
    },
}

impl CharacteristicFunction {
    pub fn empirical(spectrum: Spectrum) -> Self {
        CharacteristicFunction::Empirical(Arc::new(spectrum))
    }

    /// Evaluates `(Γ(t), Γ'(t))` at real `t`.
    pub fn eval(&self, t: f64) -> Result<(Complex64, Complex64)> {
        if !t.is_finite() {
            return Err(Error::Domain(format!("non-finite argument t = {t}")));
        }
        Ok(self.eval_unchecked(t))
    }

    fn eval_unchecked(&self, t: f64) -> (Complex64, Complex64) {
        match self {
            CharacteristicFunction::Gaussian => {
                let g = (-t * t / 2.0).exp();
                (Complex64::new(g, 0.0), Complex64::new(-t * g, 0.0))
            }
            CharacteristicFunction::ChiSquareOne => {
                // 1 - 2it never crosses the negative real axis for real t,
                // so the principal-branch powers are continuous in t.
                let z = Complex64::new(1.0, -2.0 * t);
                let gamma = z.powf(-0.5);
                let gamma_prime = Complex64::i() * z.powf(-1.5);
                (gamma, gamma_prime)
            }
            CharacteristicFunction::Empirical(spectrum) => {
                let mut sum = Complex64::new(0.0, 0.0);
                let mut weighted = Complex64::new(0.0, 0.0);
                for &c in spectrum.values() {
                    let (s, co) = (t * c).sin_cos();
                    let e = Complex64::new(co, s);
                    sum += e;
                    weighted += c * e;
                }
                let inv_n = 1.0 / spectrum.len() as f64;
                (sum * inv_n, Complex64::i() * weighted * inv_n)
            }
            CharacteristicFunction::MeanShifted { inner, shift } => {
                let (g, gp) = inner.eval_unchecked(t);
                let (s, co) = (-t * shift).sin_cos();
                let phase = Complex64::new(co, s);
                (phase * g, phase * (gp - Complex64::i() * shift * g))
            }
        }
    }

    /// Ensemble mean `C̄ = -iΓ'(0)`.
    ///
    /// The imaginary residual of `-iΓ'(0)` must be negligible; a large
    /// residual indicates a malformed empirical spectrum.
    pub fn mean(&self) -> Result<f64> {
        let (_, gp) = self.eval(0.0)?;
        let m = -Complex64::i() * gp;
        if m.im.abs() >= 1e-10 * (1.0 + m.re.abs()) {
            return Err(Error::Inconsistent(format!(
                "mean -iΓ'(0) = {m} has non-negligible imaginary part"
            )));
        }
        Ok(m.re)
    }

    /// Ensemble mean without the O(N) characteristic-function evaluation:
    /// exact per variant, bit-identical to the `-iΓ'(0)` route for the
    /// built-ins. Used by the depth-p hot path.
    pub(crate) fn mean_quick(&self) -> f64 {
        match self {
            CharacteristicFunction::Gaussian => 0.0,
            CharacteristicFunction::ChiSquareOne => 1.0,
            CharacteristicFunction::Empirical(spectrum) => spectrum.mean(),
            CharacteristicFunction::MeanShifted { inner, shift } => inner.mean_quick() - shift,
        }
    }

    /// Returns the mean-zeroed ensemble together with the subtracted mean.
    ///
    /// Depth expectations satisfy `E_p(cf) = μ + E_p(shifted)` exactly;
    /// the shift is a global phase on the circuit.
    pub fn zero_mean(&self) -> Result<(CharacteristicFunction, f64)> {
        let mu = self.mean()?;
        let shifted = CharacteristicFunction::MeanShifted {
            inner: Box::new(self.clone()),
            shift: mu,
        };
        Ok((shifted, mu))
    }
}
