//! Multistart quasi-Newton minimization of `E_p` over the 2p angles.
//!
//! Each start runs an independent BFGS descent with central-difference
//! gradients; start points are drawn from per-start ChaCha streams of a
//! master seed, so the result is identical regardless of how the starts
//! are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charfn::CharacteristicFunction;
use crate::ensemble::{ep, AngleSchedule};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizationConfig {
    /// Number of random start points.
    pub starts: usize,
    /// Master seed for start-point sampling.
    pub seed: u64,
    /// Start-point range for each γ coordinate.
    pub gamma_range: (f64, f64),
    /// Start-point range for each β coordinate.
    pub beta_range: (f64, f64),
    /// Central-difference step for gradients.
    pub fd_step: f64,
    /// Convergence threshold on the gradient ∞-norm.
    pub gradient_tolerance: f64,
    /// Iteration cap per start.
    pub max_iterations: usize,
}

impl Default for OptimizationConfig {
    fn default() -> Self {
        Self {
            starts: 64,
            seed: 0,
            gamma_range: (-2.0, 2.0),
            beta_range: (0.0, std::f64::consts::TAU),
            fd_step: 1e-6,
            gradient_tolerance: 1e-8,
            max_iterations: 500,
        }
    }
}

impl OptimizationConfig {
    fn validate(&self) -> Result<()> {
        if self.starts < 1 {
            return Err(Error::Domain("config requires starts >= 1".into()));
        }
        if !(self.fd_step > 0.0) {
            return Err(Error::Domain("config requires fd_step > 0".into()));
        }
        if self.gamma_range.0 >= self.gamma_range.1 || self.beta_range.0 >= self.beta_range.1 {
            return Err(Error::Domain("config ranges must be non-degenerate".into()));
        }
        Ok(())
    }
}

/// One start's descent record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StartRecord {
    pub start: Vec<f64>,
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OptimizationResult {
    pub p: usize,
    #[serde(flatten)]
    pub best_schedule: AngleSchedule,
    #[serde(rename = "value")]
    pub best_value: f64,
    pub starts: usize,
    pub seed: u64,
    pub converged: bool,
    pub per_start: Vec<StartRecord>,
}

/// Central finite-difference gradient, `(f(x+h·e_i) - f(x-h·e_i))/(2h)`.
pub fn fd_gradient<F>(objective: &F, point: &[f64], step: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    if !(step > 0.0) {
        return Err(Error::Domain("fd_gradient requires step > 0".into()));
    }
    let mut grad = Vec::with_capacity(point.len());
    let mut probe = point.to_vec();
    for i in 0..point.len() {
        probe[i] = point[i] + step;
        let forward = objective(&probe)?;
        probe[i] = point[i] - step;
        let backward = objective(&probe)?;
        probe[i] = point[i];
        let g = (forward - backward) / (2.0 * step);
        if !g.is_finite() {
            return Err(Error::Numerical(format!(
                "non-finite finite-difference gradient in coordinate {i}"
            )));
        }
        grad.push(g);
    }
    Ok(grad)
}

/// Outcome of one BFGS descent.
#[derive(Debug, Clone)]
pub struct Descent {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// BFGS with a backtracking Armijo line search. Converged means the
/// gradient ∞-norm fell below the tolerance; hitting the iteration cap
/// returns the best point found with `converged = false`.
pub fn local_descent<F>(objective: &F, start: &[f64], config: &OptimizationConfig) -> Result<Descent>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    config.validate()?;
    let d = start.len();
    let mut x = start.to_vec();
    let mut value = objective(&x)?;
    if !value.is_finite() {
        return Err(Error::Numerical("objective non-finite at start point".into()));
    }
    let mut grad = fd_gradient(objective, &x, config.fd_step)?;
    // Inverse Hessian approximation, row-major d×d.
    let mut h = identity(d);
    let mut iterations = 0;
    let mut converged = inf_norm(&grad) < config.gradient_tolerance;

    while !converged && iterations < config.max_iterations {
        iterations += 1;
        let mut direction = mat_vec_neg(&h, &grad);
        let mut slope = dot(&grad, &direction);
        if slope >= 0.0 {
            // Curvature information went bad; restart from steepest descent.
            h = identity(d);
            direction = grad.iter().map(|g| -g).collect();
            slope = -dot(&grad, &grad);
        }

        // Backtracking Armijo search.
        let mut step = 1.0f64;
        let mut accepted = None;
        for _ in 0..50 {
            let candidate: Vec<f64> = x
                .iter()
                .zip(&direction)
                .map(|(xi, di)| xi + step * di)
                .collect();
            let cand_value = objective(&candidate)?;
            if cand_value.is_finite() && cand_value <= value + 1e-4 * step * slope {
                accepted = Some((candidate, cand_value));
                break;
            }
            step *= 0.5;
        }
        let Some((new_x, new_value)) = accepted else {
            // No decrease found along the search direction; treat the
            // current point as terminal.
            converged = inf_norm(&grad) < config.gradient_tolerance;
            break;
        };

        let new_grad = fd_gradient(objective, &new_x, config.fd_step)?;
        let s: Vec<f64> = new_x.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = new_grad.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * inf_norm(&s) * inf_norm(&y) {
            bfgs_update(&mut h, &s, &y, sy);
        }
        x = new_x;
        value = new_value;
        grad = new_grad;
        converged = inf_norm(&grad) < config.gradient_tolerance;
    }

    Ok(Descent {
        point: x,
        value,
        iterations,
        converged,
    })
}

fn identity(d: usize) -> Vec<f64> {
    let mut m = vec![0.0; d * d];
    for i in 0..d {
        m[i * d + i] = 1.0;
    }
    m
}

fn mat_vec_neg(m: &[f64], v: &[f64]) -> Vec<f64> {
    let d = v.len();
    (0..d)
        .map(|i| -dot(&m[i * d..(i + 1) * d], v))
        .collect()
}

/// Inverse-Hessian BFGS update
/// `H ← (I - ρ s yᵀ) H (I - ρ y sᵀ) + ρ s sᵀ` with `ρ = 1/(sᵀy)`.
fn bfgs_update(h: &mut [f64], s: &[f64], y: &[f64], sy: f64) {
    let d = s.len();
    let rho = 1.0 / sy;
    let hy: Vec<f64> = (0..d).map(|i| dot(&h[i * d..(i + 1) * d], y)).collect();
    let yhy = dot(y, &hy);
    for i in 0..d {
        for j in 0..d {
            h[i * d + j] += -rho * (s[i] * hy[j] + hy[i] * s[j])
                + rho * (1.0 + rho * yhy) * s[i] * s[j];
        }
    }
}

/// Minimizes `ep_full(cf, ·)` over depth-p schedules with `config.starts`
/// independent descents.
pub fn minimize_ep(
    cf: &CharacteristicFunction,
    p: usize,
    config: &OptimizationConfig,
) -> Result<OptimizationResult> {
    minimize_ep_with_starts(cf, p, config, &[])
}

/// As [`minimize_ep`], with additional caller-chosen start points (used
/// for warm-started depth sweeps). Extra starts are appended after the
/// random ones and share the same descent settings.
pub fn minimize_ep_with_starts(
    cf: &CharacteristicFunction,
    p: usize,
    config: &OptimizationConfig,
    extra_starts: &[Vec<f64>],
) -> Result<OptimizationResult> {
    if p < 1 {
        return Err(Error::Domain("minimize_ep requires p >= 1".into()));
    }
    config.validate()?;
    for extra in extra_starts {
        if extra.len() != 2 * p {
            return Err(Error::Domain(format!(
                "extra start of dimension {}, expected {}",
                extra.len(),
                2 * p
            )));
        }
    }
    let (shifted, mu) = cf.zero_mean()?;
    let objective = move |x: &[f64]| -> Result<f64> {
        let schedule = AngleSchedule::new(x[..p].to_vec(), x[p..].to_vec())?;
        Ok(mu + ep(&shifted, &schedule)?)
    };

    let start_points: Vec<Vec<f64>> = (0..config.starts)
        .map(|i| {
            // Stream (seed, start index) keeps starts order-independent.
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(1 + i as u64);
            let mut x = Vec::with_capacity(2 * p);
            for _ in 0..p {
                x.push(rng.gen_range(config.gamma_range.0..config.gamma_range.1));
            }
            for _ in 0..p {
                x.push(rng.gen_range(config.beta_range.0..config.beta_range.1));
            }
            x
        })
        .chain(extra_starts.iter().cloned())
        .collect();

    let per_start: Vec<StartRecord> = start_points
        .into_par_iter()
        .map(|start| {
            let descent = local_descent(&objective, &start, config)?;
            Ok(StartRecord {
                start,
                point: descent.point,
                value: descent.value,
                iterations: descent.iterations,
                converged: descent.converged,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let converged = per_start.iter().any(|r| r.converged);
    let best = per_start
        .iter()
        .filter(|r| r.converged == converged)
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("at least one start");

    let best_schedule =
        AngleSchedule::new(best.point[..p].to_vec(), best.point[p..].to_vec())?.canonical();
    Ok(OptimizationResult {
        p,
        best_schedule,
        best_value: best.value,
        starts: config.starts,
        seed: config.seed,
        converged,
        per_start,
    })
}
