//! Figure-level studies: depth sweeps, finite-size convergence tables, and
//! depth-1 landscape grids, plus their CSV writers.
//!
//! All studies are deterministic functions of their seeds; CSV output is
//! assembled by index so thread count never changes a file.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charfn::{CharacteristicFunction, Spectrum};
use crate::ensemble::{b_factor, AngleSchedule, DEFAULT_MAX_DEPTH};
use crate::error::{Error, Result};
use crate::optimize::{minimize_ep_with_starts, OptimizationConfig};
use crate::problems;

/// Which built-in problem ensemble to draw instances from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Npp,
    Rcm,
}

impl ProblemKind {
    pub fn spectrum(self, n: u32, seed: u64) -> Result<Spectrum> {
        match self {
            ProblemKind::Npp => problems::npp_spectrum(&problems::sample_npp(n, seed)?),
            ProblemKind::Rcm => problems::rcm_spectrum(&problems::sample_rcm(n, seed)?),
        }
    }
}

impl std::str::FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "npp" => Ok(ProblemKind::Npp),
            "rcm" => Ok(ProblemKind::Rcm),
            other => Err(Error::Parse(format!("unknown problem kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DepthSweepRow {
    pub p: usize,
    pub schedule: AngleSchedule,
    pub value: f64,
}

/// Best value and schedule per depth; values are non-increasing in `p`
/// because every depth is warm-started from the zero-padded previous best.
#[derive(Debug, Clone, Serialize)]
pub struct DepthSweepTable {
    pub rows: Vec<DepthSweepRow>,
}

pub fn depth_sweep(
    cf: &CharacteristicFunction,
    p_max: usize,
    config: &OptimizationConfig,
) -> Result<DepthSweepTable> {
    if !(1..=DEFAULT_MAX_DEPTH).contains(&p_max) {
        return Err(Error::Domain(format!(
            "depth sweep requires 1 <= p_max <= {DEFAULT_MAX_DEPTH}, got {p_max}"
        )));
    }
    let mut rows: Vec<DepthSweepRow> = Vec::with_capacity(p_max);
    for p in 1..=p_max {
        let warm_starts = match rows.last() {
            None => Vec::new(),
            Some(prev) => warm_start_points(&prev.schedule, config.seed ^ p as u64),
        };
        let result = minimize_ep_with_starts(cf, p, config, &warm_starts)?;
        let (schedule, value) = match rows.last() {
            // The zero-padded previous best is itself a feasible depth-p
            // point, so the sweep never regresses even if every descent
            // from it stalls.
            Some(prev) if result.best_value > prev.value => {
                (prev.schedule.zero_padded(1), prev.value)
            }
            _ => (result.best_schedule, result.best_value),
        };
        rows.push(DepthSweepRow { p, schedule, value });
    }
    Ok(DepthSweepTable { rows })
}

/// The zero-padded previous best plus a few jittered copies of it.
fn warm_start_points(prev: &AngleSchedule, seed: u64) -> Vec<Vec<f64>> {
    let padded = prev.zero_padded(1);
    let flat: Vec<f64> = padded
        .gammas()
        .iter()
        .chain(padded.betas())
        .copied()
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts = vec![flat.clone()];
    for _ in 0..3 {
        starts.push(
            flat.iter()
                .map(|x| x + rng.gen_range(-0.3..0.3))
                .collect(),
        );
    }
    starts
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub n: u32,
    pub instances: usize,
    pub mean_gammas: Vec<f64>,
    pub se_gammas: Vec<f64>,
    pub mean_betas: Vec<f64>,
    pub se_betas: Vec<f64>,
    pub mean_value: f64,
}

/// Per-size averages of canonical-form instance optima.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTable {
    pub p: usize,
    pub seed: u64,
    pub rows: Vec<ConvergenceRow>,
}

/// Spectrum-size cap for the convergence study; 2^20 values per instance
/// keeps a 30-instance row tractable.
pub const MAX_CONVERGENCE_SIZE: u32 = 20;

pub fn convergence_study(
    kind: ProblemKind,
    p: usize,
    sizes: &[u32],
    instances: usize,
    seed: u64,
    config: &OptimizationConfig,
) -> Result<ConvergenceTable> {
    if sizes.is_empty() {
        return Err(Error::Domain("convergence study needs at least one size".into()));
    }
    if !sizes.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Domain("sizes must be strictly increasing".into()));
    }
    if let Some(&n) = sizes.iter().find(|&&n| n > MAX_CONVERGENCE_SIZE) {
        return Err(Error::ResourceLimit(format!(
            "n = {n} exceeds the convergence-study cap of {MAX_CONVERGENCE_SIZE}"
        )));
    }
    if instances < 1 {
        return Err(Error::Domain("instances must be >= 1".into()));
    }

    // One master stream hands out all instance seeds, so the table is a
    // pure function of (kind, p, sizes, instances, seed).
    let mut seed_rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let instance_seeds: Vec<u64> = (0..instances).map(|_| seed_rng.gen()).collect();
        let optima: Vec<(AngleSchedule, f64)> = instance_seeds
            .into_par_iter()
            .map(|instance_seed| {
                let spectrum = kind.spectrum(n, instance_seed)?;
                let cf = CharacteristicFunction::empirical(spectrum);
                let result = minimize_ep_with_starts(&cf, p, config, &[])?;
                Ok((result.best_schedule, result.best_value))
            })
            .collect::<Result<Vec<_>>>()?;

        let gather = |layer: usize, take_gamma: bool| -> Vec<f64> {
            optima
                .iter()
                .map(|(s, _)| {
                    if take_gamma {
                        s.gammas()[layer]
                    } else {
                        s.betas()[layer]
                    }
                })
                .collect()
        };
        let mut row = ConvergenceRow {
            n,
            instances,
            mean_gammas: Vec::with_capacity(p),
            se_gammas: Vec::with_capacity(p),
            mean_betas: Vec::with_capacity(p),
            se_betas: Vec::with_capacity(p),
            mean_value: optima.iter().map(|(_, v)| v).sum::<f64>() / instances as f64,
        };
        for layer in 0..p {
            let (m, s) = mean_se(&gather(layer, true));
            row.mean_gammas.push(m);
            row.se_gammas.push(s);
            let (m, s) = mean_se(&gather(layer, false));
            row.mean_betas.push(m);
            row.se_betas.push(s);
        }
        rows.push(row);
    }
    Ok(ConvergenceTable { p, seed, rows })
}

fn mean_se(samples: &[f64]) -> (f64, f64) {
    let k = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / k;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

/// Uniform axis specification for landscape grids.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridAxis {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        if steps < 2 {
            return Err(Error::Domain("grid axis needs at least 2 points".into()));
        }
        if !(min < max) || !min.is_finite() || !max.is_finite() {
            return Err(Error::Domain("grid axis requires finite min < max".into()));
        }
        Ok(Self { min, max, steps })
    }

    pub fn points(&self) -> Vec<f64> {
        let h = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.min + h * i as f64).collect()
    }
}

/// Default scan window: γ ∈ [0, 1.5], β ∈ [0, 2π], 61 points per axis.
pub fn default_gamma_axis() -> GridAxis {
    GridAxis { min: 0.0, max: 1.5, steps: 61 }
}

pub fn default_beta_axis() -> GridAxis {
    GridAxis { min: 0.0, max: std::f64::consts::TAU, steps: 61 }
}

/// Depth-1 energy surface: `values[i][j] = E₁(γ_i, β_j)`.
#[derive(Debug, Clone, Serialize)]
pub struct LandscapeGrid {
    pub gamma_axis: Vec<f64>,
    pub beta_axis: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

pub fn landscape_scan(
    cf: &CharacteristicFunction,
    gamma_grid: GridAxis,
    beta_grid: GridAxis,
) -> Result<LandscapeGrid> {
    let gamma_axis = GridAxis::new(gamma_grid.min, gamma_grid.max, gamma_grid.steps)?.points();
    let beta_axis = GridAxis::new(beta_grid.min, beta_grid.max, beta_grid.steps)?.points();
    let (shifted, mu) = cf.zero_mean()?;
    let b_factors: Vec<_> = beta_axis.iter().map(|&b| b_factor(b)).collect();
    let values = gamma_axis
        .par_iter()
        .map(|&gamma| {
            // One cf evaluation serves the whole β row.
            let (g, gp) = shifted.eval(gamma)?;
            Ok(b_factors
                .iter()
                .map(|b| mu + 2.0 * (b.conj() * g.conj() * gp).im)
                .collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    for row in &values {
        if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!("non-finite landscape entry {bad}")));
        }
    }
    Ok(LandscapeGrid { gamma_axis, beta_axis, values })
}

fn write_preamble<W: Write>(w: &mut W, invocation: Option<&str>) -> Result<()> {
    if let Some(inv) = invocation {
        writeln!(w, "# {inv}")?;
    }
    Ok(())
}

fn fmt(v: f64) -> String {
    format!("{v:.12e}")
}

/// `p,gamma_1..gamma_P,beta_1..beta_P,value` with ragged columns padded
/// empty up to the deepest row.
pub fn write_depth_sweep_csv<W: Write>(
    w: &mut W,
    table: &DepthSweepTable,
    invocation: Option<&str>,
) -> Result<()> {
    write_preamble(w, invocation)?;
    let p_max = table.rows.iter().map(|r| r.p).max().unwrap_or(0);
    let mut header = vec!["p".to_string()];
    header.extend((1..=p_max).map(|i| format!("gamma_{i}")));
    header.extend((1..=p_max).map(|i| format!("beta_{i}")));
    header.push("value".into());
    writeln!(w, "{}", header.join(","))?;
    for row in &table.rows {
        let mut fields = vec![row.p.to_string()];
        let pad = |xs: &[f64], fields: &mut Vec<String>| {
            fields.extend(xs.iter().map(|&x| fmt(x)));
            fields.extend(std::iter::repeat(String::new()).take(p_max - xs.len()));
        };
        pad(row.schedule.gammas(), &mut fields);
        pad(row.schedule.betas(), &mut fields);
        fields.push(fmt(row.value));
        writeln!(w, "{}", fields.join(","))?;
    }
    Ok(())
}

/// `n,instances,mean_gamma,se_gamma,mean_beta,se_beta,mean_value`; for
/// p > 1 the angle columns hold semicolon-joined per-layer lists.
pub fn write_convergence_csv<W: Write>(
    w: &mut W,
    table: &ConvergenceTable,
    invocation: Option<&str>,
) -> Result<()> {
    write_preamble(w, invocation)?;
    writeln!(w, "n,instances,mean_gamma,se_gamma,mean_beta,se_beta,mean_value")?;
    let join = |xs: &[f64]| xs.iter().map(|&x| fmt(x)).collect::<Vec<_>>().join(";");
    for row in &table.rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            row.n,
            row.instances,
            join(&row.mean_gammas),
            join(&row.se_gammas),
            join(&row.mean_betas),
            join(&row.se_betas),
            fmt(row.mean_value)
        )?;
    }
    Ok(())
}

/// First row = β axis (leading cell empty), first column = γ axis, body =
/// E values.
pub fn write_landscape_csv<W: Write>(
    w: &mut W,
    grid: &LandscapeGrid,
    invocation: Option<&str>,
) -> Result<()> {
    write_preamble(w, invocation)?;
    let beta_header: Vec<String> = grid.beta_axis.iter().map(|&b| fmt(b)).collect();
    writeln!(w, ",{}", beta_header.join(","))?;
    for (gamma, row) in grid.gamma_axis.iter().zip(&grid.values) {
        let cells: Vec<String> = row.iter().map(|&v| fmt(v)).collect();
        writeln!(w, "{},{}", fmt(*gamma), cells.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{SQRT_2, TAU};

    fn quick_config() -> OptimizationConfig {
        OptimizationConfig { starts: 12, ..OptimizationConfig::default() }
    }

    #[test]
    fn depth_sweep_gaussian_row_1() {
        let t = depth_sweep(&CharacteristicFunction::Gaussian, 1, &quick_config()).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_abs_diff_eq!(t.rows[0].value, -SQRT_2 * (-0.5f64).exp(), epsilon = 1e-6);
    }

    #[test]
    fn depth_sweep_chi_square_two_rows() {
        let t = depth_sweep(&CharacteristicFunction::ChiSquareOne, 2, &quick_config()).unwrap();
        assert!((t.rows[0].value - 0.557).abs() < 2e-3);
        assert!(t.rows[1].value < t.rows[0].value);
        assert!(t.rows[1].value <= t.rows[0].value + 1e-9);
        assert_eq!(t.rows[1].schedule.depth(), 2);
        assert!(depth_sweep(&CharacteristicFunction::Gaussian, 0, &quick_config()).is_err());
        assert!(depth_sweep(&CharacteristicFunction::Gaussian, 11, &quick_config()).is_err());
    }

    #[test]
    fn convergence_study_shape_and_determinism() {
        let config = OptimizationConfig { starts: 6, ..OptimizationConfig::default() };
        let t = convergence_study(ProblemKind::Npp, 1, &[6, 8], 3, 7, &config).unwrap();
        assert_eq!(t.rows.len(), 2);
        for row in &t.rows {
            assert_eq!(row.instances, 3);
            assert_eq!(row.mean_gammas.len(), 1);
            // Canonical branch: averaged γ stays positive.
            assert!(row.mean_gammas[0] > 0.0);
            assert!(row.se_gammas[0] >= 0.0);
            assert!((0.0..TAU).contains(&row.mean_betas[0]));
        }

        let single = convergence_study(ProblemKind::Rcm, 1, &[5], 1, 3, &config).unwrap();
        let again = convergence_study(ProblemKind::Rcm, 1, &[5], 1, 3, &config).unwrap();
        assert_eq!(single.rows[0].mean_gammas, again.rows[0].mean_gammas);
        assert_eq!(single.rows[0].mean_value, again.rows[0].mean_value);
        assert_eq!(single.rows[0].se_gammas, vec![0.0]);

        assert!(convergence_study(ProblemKind::Npp, 1, &[8, 8], 1, 0, &config).is_err());
        assert!(convergence_study(ProblemKind::Npp, 1, &[25], 1, 0, &config).is_err());
        assert!(convergence_study(ProblemKind::Npp, 1, &[8], 0, 0, &config).is_err());
    }

    #[test]
    fn grid_axis_points() {
        let a = GridAxis::new(0.0, 1.0, 3).unwrap();
        assert_eq!(a.points(), vec![0.0, 0.5, 1.0]);
        assert!(GridAxis::new(0.0, 1.0, 1).is_err());
        assert!(GridAxis::new(1.0, 0.0, 5).is_err());
        assert_eq!(default_gamma_axis().points().len(), 61);
        assert_abs_diff_eq!(default_beta_axis().points()[60], TAU, epsilon = 1e-15);
    }

    #[test]
    fn landscape_beta_zero_column_is_ensemble_mean() {
        let grid = landscape_scan(
            &CharacteristicFunction::ChiSquareOne,
            GridAxis::new(0.0, 1.5, 16).unwrap(),
            GridAxis::new(0.0, TAU, 9).unwrap(),
        )
        .unwrap();
        for row in &grid.values {
            assert_abs_diff_eq!(row[0], 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn landscape_matches_e1_and_finds_reported_minimum() {
        // Grid chosen so (0.241, 5.162) is an interior cell.
        let grid = landscape_scan(
            &CharacteristicFunction::ChiSquareOne,
            GridAxis::new(0.001, 1.501, 51).unwrap(),
            GridAxis::new(0.002, TAU, 61).unwrap(),
        )
        .unwrap();
        let mut best = (0usize, 0usize, f64::INFINITY);
        for (i, row) in grid.values.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let direct = crate::ensemble::e1(
                    &CharacteristicFunction::ChiSquareOne,
                    grid.gamma_axis[i],
                    grid.beta_axis[j],
                )
                .unwrap();
                assert_abs_diff_eq!(v, direct, epsilon = 1e-12);
                if v < best.2 {
                    best = (i, j, v);
                }
            }
        }
        assert!((grid.gamma_axis[best.0] - 0.241).abs() < 0.05);
        assert!((grid.beta_axis[best.1] - 5.162).abs() < 0.11);
        assert!((best.2 - 0.557).abs() < 0.01);
    }

    #[test]
    fn landscape_sign_symmetry() {
        let pos = landscape_scan(
            &CharacteristicFunction::Gaussian,
            GridAxis::new(0.1, 1.0, 10).unwrap(),
            GridAxis::new(0.0, TAU, 13).unwrap(),
        )
        .unwrap();
        let neg = landscape_scan(
            &CharacteristicFunction::Gaussian,
            GridAxis::new(-1.0, -0.1, 10).unwrap(),
            GridAxis::new(0.0, TAU, 13).unwrap(),
        )
        .unwrap();
        // E(γ, β) = E(−γ, 2π−β).
        for i in 0..10 {
            for j in 0..13 {
                assert_abs_diff_eq!(
                    pos.values[i][j],
                    neg.values[9 - i][12 - j],
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn csv_writers_shape() {
        let config = OptimizationConfig { starts: 4, ..OptimizationConfig::default() };
        let table = depth_sweep(&CharacteristicFunction::Gaussian, 2, &config).unwrap();
        let mut buf = Vec::new();
        write_depth_sweep_csv(&mut buf, &table, Some("angles --test")).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "# angles --test");
        assert_eq!(lines.next().unwrap(), "p,gamma_1,gamma_2,beta_1,beta_2,value");
        let row1: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row1.len(), 6);
        assert_eq!(row1[2], "");
        assert_eq!(row1[4], "");
        let row2: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert!(row2.iter().all(|f| !f.is_empty()));

        let conv = convergence_study(ProblemKind::Rcm, 1, &[4], 2, 1, &config).unwrap();
        let mut buf = Vec::new();
        write_convergence_csv(&mut buf, &conv, None).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,instances,"));
        assert_eq!(text.lines().count(), 2);

        let grid = landscape_scan(
            &CharacteristicFunction::Gaussian,
            GridAxis::new(0.0, 1.0, 3).unwrap(),
            GridAxis::new(0.0, 1.0, 4).unwrap(),
        )
        .unwrap();
        let mut buf = Vec::new();
        write_landscape_csv(&mut buf, &grid, None).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with(','));
        assert_eq!(lines[1].split(',').count(), 5);
    }

    #[test]
    fn problem_kind_parsing() {
        assert_eq!("npp".parse::<ProblemKind>().unwrap(), ProblemKind::Npp);
        assert_eq!("rcm".parse::<ProblemKind>().unwrap(), ProblemKind::Rcm);
        assert!("sk".parse::<ProblemKind>().is_err());
    }
}
