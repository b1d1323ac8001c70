//! Ensemble expectation `E_p(γ⃗, β⃗)` of the Grover-QAOA state,
//! evaluated from a characteristic function.
//!
//! Closed forms exist at depth 1 and 2; arbitrary depth is the bitmask
//! partition sum in which each off-diagonal `(k_bra, k_ket)` pair
//! contributes a product of `Γ` factors over contiguous γ-ranges, one
//! `Γ'` factor for the central partition, and one `B(β)` factor per set
//! bit. The statevector simulator is the exact finite-size oracle for
//! every formula here.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::charfn::CharacteristicFunction;
use crate::error::{Error, Result};

/// Largest depth the partition sum will evaluate by default
/// (4^10 ≈ 10^6 terms per evaluation).
pub const DEFAULT_MAX_DEPTH: usize = 10;

/// Tolerance on `|C̄|` for the zero-mean precondition of the depth ≥ 2
/// formulas.
pub const MEAN_TOLERANCE: f64 = 1e-10;

/// Depth-p parameter pair `(γ_1..γ_p, β_1..β_p)`, radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleSchedule {
    gammas: Vec<f64>,
    betas: Vec<f64>,
}

impl AngleSchedule {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if gammas.is_empty() || gammas.len() != betas.len() {
            return Err(Error::Domain(format!(
                "schedule needs matching non-empty angle lists, got {} gammas and {} betas",
                gammas.len(),
                betas.len()
            )));
        }
        if !gammas.iter().chain(betas.iter()).all(|a| a.is_finite()) {
            return Err(Error::Domain("angles must be finite".into()));
        }
        Ok(Self { gammas, betas })
    }

    pub fn depth(&self) -> usize {
        self.gammas.len()
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// Extends the schedule with identity layers (γ = β = 0); the
    /// prepared state and all expectations are unchanged.
    pub fn zero_padded(&self, extra_layers: usize) -> Self {
        let mut gammas = self.gammas.clone();
        let mut betas = self.betas.clone();
        gammas.extend(std::iter::repeat(0.0).take(extra_layers));
        betas.extend(std::iter::repeat(0.0).take(extra_layers));
        Self { gammas, betas }
    }

    /// Canonical form for reporting: flip to the `γ_1 > 0` branch of the
    /// `(γ⃗, β⃗) → (-γ⃗, -β⃗)` symmetry, then reduce every β mod 2π.
    pub fn canonical(&self) -> Self {
        let flip = self.gammas[0] < 0.0;
        let gammas: Vec<f64> = self
            .gammas
            .iter()
            .map(|&g| if flip { -g } else { g })
            .collect();
        let betas: Vec<f64> = self
            .betas
            .iter()
            .map(|&b| {
                let b = if flip { -b } else { b };
                b.rem_euclid(std::f64::consts::TAU)
            })
            .collect();
        Self { gammas, betas }
    }
}

/// Driver coefficient `B(β) = e^{iβ} - 1` of the rank-one update
/// `I + B(β)|+⟩⟨+|`.
pub fn b_factor(beta: f64) -> Complex64 {
    let (s, c) = beta.sin_cos();
    Complex64::new(c - 1.0, s)
}

/// Depth-1 expectation, mean-aware:
/// `E_1 = C̄(1 + BB*ΓΓ*) + 2 Im(B* Γ* Γ')` at `(γ, β)`.
pub fn e1(cf: &CharacteristicFunction, gamma: f64, beta: f64) -> Result<f64> {
    let mean = cf.mean()?;
    let (g, gp) = cf.eval(gamma)?;
    let b = b_factor(beta);
    Ok(mean * (1.0 + b.norm_sqr() * g.norm_sqr()) + 2.0 * (b.conj() * g.conj() * gp).im)
}

fn require_zero_mean(cf: &CharacteristicFunction, what: &str) -> Result<()> {
    let mean = cf.mean_quick();
    if mean.abs() > MEAN_TOLERANCE {
        return Err(Error::Precondition(format!(
            "{what} requires a zero-mean characteristic function (mean = {mean:e}); \
             apply zero_mean first"
        )));
    }
    Ok(())
}

/// Depth-2 closed form (five terms built from the depth-1 expression).
/// Requires a zero-mean characteristic function.
pub fn e2(cf: &CharacteristicFunction, schedule: &AngleSchedule) -> Result<f64> {
    if schedule.depth() != 2 {
        return Err(Error::Domain(format!(
            "e2 requires a depth-2 schedule, got p = {}",
            schedule.depth()
        )));
    }
    require_zero_mean(cf, "e2")?;
    let (g1, g2) = (schedule.gammas()[0], schedule.gammas()[1]);
    let (b1, b2) = (schedule.betas()[0], schedule.betas()[1]);
    let (gam1, _) = cf.eval(g1)?;
    let (gam2, gam2p) = cf.eval(g2)?;
    let (gam12, gam12p) = cf.eval(g1 + g2)?;
    let bb1 = b_factor(b1);
    let bb2 = b_factor(b2);

    Ok(e1(cf, g1, b1)?
        + e1(cf, g1 + g2, b2)?
        + bb1.norm_sqr() * gam1.norm_sqr() * e1(cf, g2, b2)?
        + 2.0 * (bb1.conj() * bb2.conj() * gam1.conj() * gam2.conj() * gam12p).im
        + 2.0 * (bb1 * bb2.conj() * gam1 * gam2p * gam12.conj()).im)
}

/// One term's index structure in the depth-p partition sum: the sorted
/// boundary set `{0} ∪ {i | bit i of mask}`, the contiguous layer ranges
/// between consecutive boundaries, and the central indices above the
/// last boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermPartition {
    pub boundary_set: Vec<usize>,
    /// Half-open-from-left ranges stored as inclusive `(start, end)`
    /// layer index pairs, `start ≤ end`.
    pub partitions: Vec<(usize, usize)>,
    pub central_indices: Vec<usize>,
}

/// Decomposes a `p`-bit mask into its boundary partitions. Bit `i - 1`
/// of `mask` marks a driver insertion after layer `i`.
pub fn partitions_of(mask: usize, p: usize) -> Result<TermPartition> {
    if p < 1 {
        return Err(Error::Domain("partitions_of requires p >= 1".into()));
    }
    if mask >= 1usize << p {
        return Err(Error::Domain(format!(
            "mask {mask} out of range for p = {p}"
        )));
    }
    let mut boundary_set = vec![0usize];
    boundary_set.extend((1..=p).filter(|i| mask >> (i - 1) & 1 == 1));
    let partitions = boundary_set
        .windows(2)
        .map(|w| (w[0] + 1, w[1]))
        .collect();
    let central_indices = (boundary_set[boundary_set.len() - 1] + 1..=p).collect();
    Ok(TermPartition {
        boundary_set,
        partitions,
        central_indices,
    })
}

/// Depth-p expectation via the partition sum, with the default depth cap.
/// Requires a zero-mean characteristic function.
pub fn ep(cf: &CharacteristicFunction, schedule: &AngleSchedule) -> Result<f64> {
    ep_with_limit(cf, schedule, DEFAULT_MAX_DEPTH)
}

/// As [`ep`], with an explicit depth cap (each evaluation visits
/// `2^{p-1}(2^p - 1)` off-diagonal terms).
pub fn ep_with_limit(
    cf: &CharacteristicFunction,
    schedule: &AngleSchedule,
    max_depth: usize,
) -> Result<f64> {
    let p = schedule.depth();
    if p > max_depth {
        return Err(Error::ResourceLimit(format!(
            "depth p = {p} exceeds the evaluation cap p_max = {max_depth}"
        )));
    }
    require_zero_mean(cf, "ep")?;
    let (value, _) = partition_sum(cf, schedule)?;
    Ok(value)
}

/// Mean-aware wrapper: `E_p(cf) = μ + E_p(cf shifted by μ)`.
pub fn ep_full(cf: &CharacteristicFunction, schedule: &AngleSchedule) -> Result<f64> {
    let (shifted, mu) = cf.zero_mean()?;
    Ok(mu + ep(&shifted, schedule)?)
}

/// Evaluates the off-diagonal partition sum; also returns the number of
/// `(k_bra < k_ket)` terms visited.
pub(crate) fn partition_sum(
    cf: &CharacteristicFunction,
    schedule: &AngleSchedule,
) -> Result<(f64, u64)> {
    let p = schedule.depth();
    let gammas = schedule.gammas();
    let betas = schedule.betas();

    // Prefix sums of γ; the range sum over layers (a, b] is
    // prefix[b] - prefix[a].
    let mut prefix = vec![0.0f64; p + 1];
    for i in 0..p {
        prefix[i + 1] = prefix[i] + gammas[i];
    }

    // (Γ, Γ') at every contiguous range sum: at most p(p+1)/2 evaluations
    // per call. Negative arguments come from the real-distribution
    // symmetry Γ(-t) = Γ(t)*, Γ'(-t) = -Γ'(t)*, and every central
    // argument prefix[mb] - prefix[mk] is itself a ± range sum.
    let mut table = vec![vec![(Complex64::default(), Complex64::default()); p + 1]; p + 1];
    for a in 0..p {
        for b in a + 1..=p {
            table[a][b] = cf.eval(prefix[b] - prefix[a])?;
        }
    }
    // Γ'(0) = i·C̄, a residual under the enforced zero-mean precondition.
    let gp_zero = Complex64::i() * cf.mean_quick();
    let mut gamma_prime = vec![vec![Complex64::default(); p + 1]; p + 1];
    for (mb, row) in gamma_prime.iter_mut().enumerate() {
        for (mk, entry) in row.iter_mut().enumerate() {
            *entry = match mb.cmp(&mk) {
                std::cmp::Ordering::Greater => table[mk][mb].1,
                std::cmp::Ordering::Less => -table[mb][mk].1.conj(),
                std::cmp::Ordering::Equal => gp_zero,
            };
        }
    }
    let b_factors: Vec<Complex64> = betas.iter().map(|&b| b_factor(b)).collect();

    // Per-mask data built by peeling the top set bit: the Γ product over
    // the mask's partitions times its B factors, for ket (+γ, B) and
    // bra (-γ, B*) sides, plus the mask's top boundary layer.
    let n_masks = 1usize << p;
    let mut top = vec![0usize; n_masks];
    let mut ket = vec![Complex64::new(1.0, 0.0); n_masks];
    let mut bra = vec![Complex64::new(1.0, 0.0); n_masks];
    for mask in 1..n_masks {
        let top_bit = usize::BITS - 1 - mask.leading_zeros() as u32;
        let top_layer = top_bit as usize + 1;
        let low = mask & !(1usize << top_bit);
        let prev = top[low];
        top[mask] = top_layer;
        let gamma_range = table[prev][top_layer].0;
        ket[mask] = ket[low] * gamma_range * b_factors[top_layer - 1];
        bra[mask] = bra[low] * gamma_range.conj() * b_factors[top_layer - 1].conj();
    }

    let mut acc = 0.0f64;
    let mut visited = 0u64;
    for k_bra in 0..n_masks {
        let bra_part = bra[k_bra];
        let gp_row = &gamma_prime[top[k_bra]];
        for k_ket in k_bra + 1..n_masks {
            acc += (bra_part * gp_row[top[k_ket]] * ket[k_ket]).im;
            visited += 1;
        }
    }
    Ok((2.0 * acc, visited))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charfn::Spectrum;
    use crate::problems;
    use crate::simulator;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn random_schedule(p: usize, rng: &mut ChaCha8Rng) -> AngleSchedule {
        let gammas = (0..p).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let betas = (0..p).map(|_| rng.gen_range(0.0..TAU)).collect();
        AngleSchedule::new(gammas, betas).unwrap()
    }

    #[test]
    fn b_factor_examples() {
        assert_eq!(b_factor(0.0), Complex64::new(0.0, 0.0));
        assert_abs_diff_eq!((b_factor(PI) - Complex64::new(-2.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            (b_factor(FRAC_PI_2) - Complex64::new(-1.0, 1.0)).norm(),
            0.0,
            epsilon = 1e-15
        );
        assert!(b_factor(2.3).norm() <= 2.0 + 1e-15);
        assert_abs_diff_eq!((b_factor(1.1 + TAU) - b_factor(1.1)).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn e1_examples() {
        let gauss = CharacteristicFunction::Gaussian;
        for &g in &[0.0, 0.4, -1.3] {
            assert_abs_diff_eq!(e1(&gauss, g, 0.0).unwrap(), 0.0, epsilon = 1e-15);
        }
        // Closed form 2γ e^{-γ²} sin β at γ = 1/√2, β = π/2.
        let expected = std::f64::consts::SQRT_2 * (-0.5f64).exp();
        assert_abs_diff_eq!(
            e1(&gauss, 1.0 / std::f64::consts::SQRT_2, FRAC_PI_2).unwrap(),
            expected,
            epsilon = 1e-12
        );
        // Two-level spectrum: one exact Grover rotation reaches the ground
        // state, expectation -1 (cross-checked against the simulator).
        let spectrum = Spectrum::new(1, vec![-1.0, 1.0]).unwrap();
        let cf = CharacteristicFunction::empirical(spectrum);
        assert_abs_diff_eq!(e1(&cf, PI / 4.0, 3.0 * PI / 2.0).unwrap(), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn e2_reduces_to_e1_when_second_driver_off() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (cf, _) = CharacteristicFunction::ChiSquareOne.zero_mean().unwrap();
        for _ in 0..20 {
            let g1 = rng.gen_range(-2.0..2.0);
            let g2 = rng.gen_range(-2.0..2.0);
            let b1 = rng.gen_range(0.0..TAU);
            let schedule = AngleSchedule::new(vec![g1, g2], vec![b1, 0.0]).unwrap();
            assert_abs_diff_eq!(
                e2(&cf, &schedule).unwrap(),
                e1(&cf, g1, b1).unwrap(),
                epsilon = 1e-13
            );
        }
        let zeros = AngleSchedule::new(vec![0.0, 0.0], vec![0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(e2(&cf, &zeros).unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn e2_matches_statevector_oracle() {
        let inst = problems::sample_rcm(6, 7).unwrap();
        let spectrum = problems::rcm_spectrum(&inst).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let schedule = random_schedule(2, &mut rng);
        let state = simulator::prepare_qaoa(&spectrum, &schedule).unwrap();
        let oracle = simulator::expectation(&state, &spectrum).unwrap();

        let cf = CharacteristicFunction::empirical(spectrum);
        let (shifted, mu) = cf.zero_mean().unwrap();
        let formula = mu + e2(&shifted, &schedule).unwrap();
        assert!((formula - oracle).abs() < 1e-9, "{formula} vs {oracle}");
    }

    #[test]
    fn e2_rejects_nonzero_mean() {
        let schedule = AngleSchedule::new(vec![0.1, 0.2], vec![0.3, 0.4]).unwrap();
        let err = e2(&CharacteristicFunction::ChiSquareOne, &schedule).unwrap_err();
        assert!(err.to_string().contains("zero_mean"));
    }

    #[test]
    fn partitions_of_examples() {
        let tp = partitions_of(0, 3).unwrap();
        assert_eq!(tp.boundary_set, vec![0]);
        assert!(tp.partitions.is_empty());
        assert_eq!(tp.central_indices, vec![1, 2, 3]);

        // Single bit k set: one partition {1..k}, central {k+1..p}.
        for p in 1..=5usize {
            for k in 1..=p {
                let tp = partitions_of(1 << (k - 1), p).unwrap();
                assert_eq!(tp.partitions, vec![(1, k)]);
                assert_eq!(tp.central_indices, (k + 1..=p).collect::<Vec<_>>());
            }
        }

        // Bits 1 and 3 set, p = 3: partitions {1}, {2,3}, empty central.
        let tp = partitions_of(0b101, 3).unwrap();
        assert_eq!(tp.boundary_set, vec![0, 1, 3]);
        assert_eq!(tp.partitions, vec![(1, 1), (2, 3)]);
        assert!(tp.central_indices.is_empty());

        assert!(partitions_of(8, 3).is_err());
    }

    #[test]
    fn ep_reduces_to_e1_and_e2() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let spectrum = Spectrum::new(3, (0..8).map(|i| (i as f64).sin()).collect()).unwrap();
        let (emp, _) = CharacteristicFunction::empirical(spectrum).zero_mean().unwrap();
        let (chi, _) = CharacteristicFunction::ChiSquareOne.zero_mean().unwrap();
        for cf in [CharacteristicFunction::Gaussian, chi, emp] {
            for _ in 0..30 {
                let s1 = random_schedule(1, &mut rng);
                assert_abs_diff_eq!(
                    ep(&cf, &s1).unwrap(),
                    e1(&cf, s1.gammas()[0], s1.betas()[0]).unwrap(),
                    epsilon = 1e-12
                );
                let s2 = random_schedule(2, &mut rng);
                assert_abs_diff_eq!(ep(&cf, &s2).unwrap(), e2(&cf, &s2).unwrap(), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn ep_matches_statevector_oracle_at_depth_3() {
        let inst = problems::sample_rcm(6, 42).unwrap();
        let spectrum = problems::rcm_spectrum(&inst).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let schedule = random_schedule(3, &mut rng);
        let state = simulator::prepare_qaoa(&spectrum, &schedule).unwrap();
        let oracle = simulator::expectation(&state, &spectrum).unwrap();
        let cf = CharacteristicFunction::empirical(spectrum);
        let formula = ep_full(&cf, &schedule).unwrap();
        assert!((formula - oracle).abs() < 1e-9, "{formula} vs {oracle}");
    }

    #[test]
    fn ep_full_examples() {
        let zeros = AngleSchedule::new(vec![0.0], vec![0.0]).unwrap();
        assert_abs_diff_eq!(
            ep_full(&CharacteristicFunction::ChiSquareOne, &zeros).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = random_schedule(3, &mut rng);
        assert_abs_diff_eq!(
            ep_full(&CharacteristicFunction::Gaussian, &s).unwrap(),
            ep(&CharacteristicFunction::Gaussian, &s).unwrap(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn npp_instance_near_ensemble_value_at_paper_angles() {
        let schedule = AngleSchedule::new(vec![0.241], vec![5.162]).unwrap();
        let inst = problems::sample_npp(8, 1).unwrap();
        let spectrum = problems::npp_spectrum(&inst).unwrap();
        let state = simulator::prepare_qaoa(&spectrum, &schedule).unwrap();
        let oracle = simulator::expectation(&state, &spectrum).unwrap();
        let cf = CharacteristicFunction::empirical(spectrum);
        let value = ep_full(&cf, &schedule).unwrap();
        assert!((value - oracle).abs() < 1e-9);
        // Instance fluctuation around the ensemble optimum 0.557 is large
        // at n = 8; only a loose closeness check is meaningful.
        assert!((value - 0.557).abs() < 0.3, "value = {value}");
    }

    #[test]
    fn sign_symmetry_and_periodicity() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let (chi, _) = CharacteristicFunction::ChiSquareOne.zero_mean().unwrap();
        for p in 1..=4usize {
            for _ in 0..10 {
                let s = random_schedule(p, &mut rng);
                let flipped = AngleSchedule::new(
                    s.gammas().iter().map(|g| -g).collect(),
                    s.betas().iter().map(|b| -b).collect(),
                )
                .unwrap();
                let v = ep(&chi, &s).unwrap();
                assert_abs_diff_eq!(v, ep(&chi, &flipped).unwrap(), epsilon = 1e-12);

                let j = rng.gen_range(0..p);
                let mut betas = s.betas().to_vec();
                betas[j] += TAU;
                let shifted = AngleSchedule::new(s.gammas().to_vec(), betas).unwrap();
                assert_abs_diff_eq!(v, ep(&chi, &shifted).unwrap(), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn vanishing_driver_collapses_to_mean() {
        let spectrum = Spectrum::new(2, vec![0.3, -0.1, 0.7, 1.2]).unwrap();
        let cf = CharacteristicFunction::empirical(spectrum);
        let mean = cf.mean().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for p in 1..=3usize {
            let gammas: Vec<f64> = (0..p).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let s = AngleSchedule::new(gammas, vec![0.0; p]).unwrap();
            assert_abs_diff_eq!(ep_full(&cf, &s).unwrap(), mean, epsilon = 1e-12);
        }
    }

    #[test]
    fn off_diagonal_term_count() {
        let (chi, _) = CharacteristicFunction::ChiSquareOne.zero_mean().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for p in 1..=6usize {
            let s = random_schedule(p, &mut rng);
            let (_, visited) = partition_sum(&chi, &s).unwrap();
            let expected = (1u64 << (p - 1)) * ((1u64 << p) - 1);
            assert_eq!(visited, expected);
        }
    }

    #[test]
    fn depth_cap_enforced() {
        let s = AngleSchedule::new(vec![0.1; 3], vec![0.2; 3]).unwrap();
        let (chi, _) = CharacteristicFunction::ChiSquareOne.zero_mean().unwrap();
        assert!(matches!(
            ep_with_limit(&chi, &s, 2),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn schedule_validation_and_canonical_form() {
        assert!(AngleSchedule::new(vec![], vec![]).is_err());
        assert!(AngleSchedule::new(vec![0.1], vec![0.1, 0.2]).is_err());
        assert!(AngleSchedule::new(vec![f64::NAN], vec![0.0]).is_err());

        let s = AngleSchedule::new(vec![-0.3, 0.5], vec![-1.0, 7.0]).unwrap();
        let c = s.canonical();
        assert_eq!(c.gammas(), &[0.3, -0.5]);
        assert_abs_diff_eq!(c.betas()[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.betas()[1], (-7.0f64).rem_euclid(TAU), epsilon = 1e-15);
    }

    proptest::proptest! {
        #[test]
        fn prop_b_factor_magnitude(beta in -20.0..20.0f64) {
            // |B(β)|² = 2 − 2cos β for every β.
            let b = b_factor(beta);
            proptest::prop_assert!((b.norm_sqr() - (2.0 - 2.0 * beta.cos())).abs() < 1e-12);
        }

        #[test]
        fn prop_e1_symmetries(gamma in -2.0..2.0f64, beta in 0.0..TAU) {
            let cf = CharacteristicFunction::Gaussian;
            let v = e1(&cf, gamma, beta).unwrap();
            let flipped = e1(&cf, -gamma, -beta).unwrap();
            let shifted = e1(&cf, gamma, beta + TAU).unwrap();
            proptest::prop_assert!((v - flipped).abs() < 1e-12);
            proptest::prop_assert!((v - shifted).abs() < 1e-12);
        }

        #[test]
        fn prop_canonical_preserves_energy(
            g1 in -1.5..1.5f64,
            g2 in -1.5..1.5f64,
            b1 in -10.0..10.0f64,
            b2 in -10.0..10.0f64,
        ) {
            let (chi, _) = CharacteristicFunction::ChiSquareOne.zero_mean().unwrap();
            let s = AngleSchedule::new(vec![g1, g2], vec![b1, b2]).unwrap();
            let v = ep(&chi, &s).unwrap();
            let c = ep(&chi, &s.canonical()).unwrap();
            proptest::prop_assert!((v - c).abs() < 1e-12);
        }
    }
}
