//! Exact dense statevector evolution of the Grover-QAOA circuit.
//!
//! The driver is applied as the rank-one update `I + B(β)|+⟩⟨+|` in O(N)
//! rather than through a gate decomposition. No renormalization is ever
//! performed; norm drift is monitored by tests so unitarity bugs surface
//! instead of being papered over. The driver's inner sum uses a plain
//! sequential reduction, which fixes the floating-point result.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::charfn::{Spectrum, MAX_QUBITS};
use crate::ensemble::{b_factor, AngleSchedule};
use crate::error::{Error, Result};

/// Dense 2^n-amplitude state of the Grover-QAOA register.
#[derive(Debug, Clone)]
pub struct StateVector {
    n: u32,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn qubits(&self) -> u32 {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Uniform superposition `|+⟩^⊗n`.
pub fn init_plus(n: u32) -> Result<StateVector> {
    if n < 1 {
        return Err(Error::Domain("state requires n >= 1".into()));
    }
    if n > MAX_QUBITS {
        return Err(Error::ResourceLimit(format!(
            "n = {n} exceeds the {MAX_QUBITS}-qubit cap"
        )));
    }
    let size = 1usize << n;
    let amp = Complex64::new(1.0 / (size as f64).sqrt(), 0.0);
    Ok(StateVector {
        n,
        amplitudes: vec![amp; size],
    })
}

/// Diagonal phase layer: `amplitudes[z] *= e^{iγ C(z)}`.
pub fn apply_phase(state: &mut StateVector, spectrum: &Spectrum, gamma: f64) -> Result<()> {
    if spectrum.qubits() != state.n {
        return Err(Error::Domain(format!(
            "spectrum for {} qubits applied to a {}-qubit state",
            spectrum.qubits(),
            state.n
        )));
    }
    for (a, &c) in state.amplitudes.iter_mut().zip(spectrum.values()) {
        let (s, co) = (gamma * c).sin_cos();
        *a *= Complex64::new(co, s);
    }
    Ok(())
}

/// Grover driver layer `I + B(β)|+⟩⟨+|`: every amplitude gains
/// `B(β)·s/√N` where `s = (1/√N)·Σ_z amplitudes[z]`.
pub fn apply_grover_driver(state: &mut StateVector, beta: f64) {
    let size = state.amplitudes.len() as f64;
    let overlap: Complex64 = state.amplitudes.iter().sum::<Complex64>() / size.sqrt();
    let kick = b_factor(beta) * overlap / size.sqrt();
    for a in &mut state.amplitudes {
        *a += kick;
    }
}

/// Prepares the depth-p Grover-QAOA state: `|+⟩`, then per layer a phase
/// and a driver application.
pub fn prepare_qaoa(spectrum: &Spectrum, schedule: &AngleSchedule) -> Result<StateVector> {
    let mut state = init_plus(spectrum.qubits())?;
    for (&gamma, &beta) in schedule.gammas().iter().zip(schedule.betas()) {
        apply_phase(&mut state, spectrum, gamma)?;
        apply_grover_driver(&mut state, beta);
    }
    Ok(state)
}

/// Problem expectation `Σ_z C(z)·|amplitudes[z]|²`.
pub fn expectation(state: &StateVector, spectrum: &Spectrum) -> Result<f64> {
    if spectrum.qubits() != state.n {
        return Err(Error::Domain(format!(
            "spectrum for {} qubits measured on a {}-qubit state",
            spectrum.qubits(),
            state.n
        )));
    }
    Ok(state
        .amplitudes
        .iter()
        .zip(spectrum.values())
        .map(|(a, &c)| c * a.norm_sqr())
        .sum())
}

/// Draws `shots` i.i.d. configuration indices from the measurement
/// distribution `|amplitudes[z]|²`.
pub fn sample_bitstrings(state: &StateVector, seed: u64, shots: usize) -> Result<Vec<usize>> {
    if shots < 1 {
        return Err(Error::Domain("shots must be >= 1".into()));
    }
    let mut cumulative = Vec::with_capacity(state.amplitudes.len());
    let mut acc = 0.0f64;
    for a in &state.amplitudes {
        acc += a.norm_sqr();
        cumulative.push(acc);
    }
    let total = acc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..shots)
        .map(|_| {
            let u: f64 = rng.gen_range(0.0..total);
            cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1)
        })
        .collect();
    Ok(samples)
}
