//! Finite-size instance generators for the two built-in ensembles.
//!
//! The random cost model (RCM) draws one Gaussian weight per spin, so the
//! spectrum of `Σ g_i Z_i` samples a standard normal independently of
//! problem size. The number partitioning problem (NPP) squares the signed
//! sum of uniform numbers, giving a χ²₁-distributed spectrum with unit
//! mean in the large-n limit.
//!
//! Instances are deterministic functions of `(n, seed)` via ChaCha8.
//! Gaussian variates use the Box-Muller transform of two uniforms so the
//! sampled weights are reproducible from the documented RNG alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::charfn::{Spectrum, MAX_QUBITS};
use crate::error::{Error, Result};

/// Random cost model instance: `n` spin weights, i.i.d. Normal(0, 1/n).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RcmInstance {
    pub n: u32,
    pub weights: Vec<f64>,
}

/// Number partitioning instance: `n` numbers, i.i.d. uniform on
/// `[0, √(3/n)]` so the squared-residue spectrum has unit mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NppInstance {
    pub n: u32,
    pub numbers: Vec<f64>,
}

/// Upper end of the NPP number range for a given size.
pub fn npp_x_max(n: u32) -> f64 {
    (3.0 / n as f64).sqrt()
}

fn check_size(n: u32) -> Result<()> {
    if n < 1 {
        return Err(Error::Domain("instance size must satisfy n >= 1".into()));
    }
    Ok(())
}

fn check_spectrum_size(n: u32) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(Error::ResourceLimit(format!(
            "spectrum for n = {n} exceeds the {MAX_QUBITS}-qubit cap"
        )));
    }
    Ok(())
}

/// Standard normal variate by Box-Muller from two uniforms in (0, 1].
fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn sample_rcm(n: u32, seed: u64) -> Result<RcmInstance> {
    check_size(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / (n as f64).sqrt();
    let weights = (0..n).map(|_| scale * standard_normal(&mut rng)).collect();
    Ok(RcmInstance { n, weights })
}

pub fn sample_npp(n: u32, seed: u64) -> Result<NppInstance> {
    check_size(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x_max = npp_x_max(n);
    let numbers = (0..n).map(|_| rng.gen_range(0.0..x_max)).collect();
    Ok(NppInstance { n, numbers })
}

/// Signed sum `Σ_i (-1)^{z_i} w_i` over bit `i` of `z` (bit 0 least
/// significant).
fn signed_sums(n: u32, weights: &[f64]) -> Vec<f64> {
    let size = 1usize << n;
    let mut sums = vec![0.0f64; size];
    // Build by spins: each spin flips the sign of its weight on the upper
    // half of each 2^(i+1) block.
    for (i, &w) in weights.iter().enumerate() {
        let stride = 1usize << i;
        for z in 0..size {
            sums[z] += if z & stride == 0 { w } else { -w };
        }
    }
    sums
}

/// Spectrum of `Σ_i g_i Z_i`: `values[z] = Σ_i (-1)^{z_i} g_i`.
pub fn rcm_spectrum(inst: &RcmInstance) -> Result<Spectrum> {
    check_spectrum_size(inst.n)?;
    Spectrum::new(inst.n, signed_sums(inst.n, &inst.weights))
}

/// Spectrum of the squared NPP residue: `values[z] = (Σ_i (-1)^{z_i} x_i)²`.
pub fn npp_spectrum(inst: &NppInstance) -> Result<Spectrum> {
    check_spectrum_size(inst.n)?;
    let mut values = signed_sums(inst.n, &inst.numbers);
    for v in &mut values {
        *v *= *v;
    }
    Spectrum::new(inst.n, values)
}

/// On-disk instance description, `{"kind", "n", "seed", "values"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub kind: String,
    pub n: u32,
    pub seed: u64,
    pub values: Vec<f64>,
}
