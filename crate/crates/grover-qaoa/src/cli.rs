//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage error, 3 domain/precondition/input
//! error, 4 resource limit. Every output file embeds the invocation that
//! produced it, and files are written temp-then-rename so a failed run
//! never leaves a partial artifact.

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::charfn::{CharacteristicFunction, Spectrum};
use crate::ensemble::{ep_full, AngleSchedule};
use crate::error::{Error, Result};
use crate::experiments::{
    self, convergence_study, depth_sweep, landscape_scan, GridAxis, ProblemKind,
};
use crate::optimize::{minimize_ep, OptimizationConfig};
use crate::problems::InstanceFile;
use crate::simulator;

#[derive(Debug, Parser)]
#[command(name = "grover-qaoa", version, about = "Grover-driver QAOA angle schedules from characteristic functions")]
struct Cli {
    /// Worker threads (0 = auto). Never affects numeric results.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EnsembleArg {
    /// Standard normal objective values (random cost model limit).
    Gaussian,
    /// χ²₁ objective values (number partitioning limit).
    Chisq1,
}

impl EnsembleArg {
    fn cf(self) -> CharacteristicFunction {
        match self {
            EnsembleArg::Gaussian => CharacteristicFunction::Gaussian,
            EnsembleArg::Chisq1 => CharacteristicFunction::ChiSquareOne,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProblemArg {
    Npp,
    Rcm,
}

impl From<ProblemArg> for ProblemKind {
    fn from(p: ProblemArg) -> Self {
        match p {
            ProblemArg::Npp => ProblemKind::Npp,
            ProblemArg::Rcm => ProblemKind::Rcm,
        }
    }
}

/// Either a built-in ensemble or an on-disk spectrum file.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct SourceArgs {
    /// Built-in ensemble characteristic function.
    #[arg(long, value_enum)]
    ensemble: Option<EnsembleArg>,

    /// Spectrum file (text `n=<int>` + values, or JSON), used as an
    /// empirical characteristic function.
    #[arg(long)]
    spectrum: Option<PathBuf>,
}

impl SourceArgs {
    fn cf(&self) -> Result<CharacteristicFunction> {
        match (&self.ensemble, &self.spectrum) {
            (Some(e), None) => Ok(e.cf()),
            (None, Some(path)) => Ok(CharacteristicFunction::empirical(read_spectrum(path)?)),
            _ => unreachable!("clap group enforces exactly one source"),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimize a depth-p angle schedule for a built-in ensemble.
    Angles {
        #[arg(long, value_enum)]
        ensemble: EnsembleArg,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 64)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output JSON path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the ensemble expectation E_p at given angles.
    Expectation {
        #[command(flatten)]
        source: SourceArgs,
        /// Comma-separated γ values in radians; the length defines p.
        #[arg(long)]
        gammas: String,
        /// Comma-separated β values in radians; must match --gammas.
        #[arg(long)]
        betas: String,
    },
    /// Scan the depth-1 energy surface onto a CSV grid.
    Landscape {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 0.0)]
        gamma_min: f64,
        #[arg(long, default_value_t = 1.5)]
        gamma_max: f64,
        #[arg(long, default_value_t = 61)]
        gamma_steps: usize,
        #[arg(long, default_value_t = 0.0)]
        beta_min: f64,
        #[arg(long, default_value_t = std::f64::consts::TAU)]
        beta_max: f64,
        #[arg(long, default_value_t = 61)]
        beta_steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Finite-size convergence study of per-instance optima.
    Converge {
        #[arg(long, value_enum)]
        problem: ProblemArg,
        #[arg(long)]
        depth: usize,
        /// Comma-separated strictly increasing problem sizes.
        #[arg(long)]
        sizes: String,
        #[arg(long, default_value_t = 30)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        starts: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Depth sweep: best schedule and value for p = 1..=p_max.
    Sweep {
        #[arg(long, value_enum)]
        ensemble: EnsembleArg,
        #[arg(long)]
        max_depth: usize,
        #[arg(long, default_value_t = 64)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact statevector expectation (and optional samples) on a spectrum.
    Simulate {
        #[arg(long)]
        spectrum: PathBuf,
        #[arg(long)]
        gammas: String,
        #[arg(long)]
        betas: String,
        /// Measurement shots; omit to skip sampling.
        #[arg(long)]
        shots: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sample a problem instance and write its spectrum (plus an
    /// `.instance.json` sibling describing the draw).
    Spectrum {
        #[arg(long, value_enum)]
        problem: ProblemArg,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Parses argv and runs a subcommand, returning the process exit code.
pub fn run(args: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let invocation = args.join(" ");
    let body = || -> Result<()> { dispatch(cli.command, &invocation) };
    let outcome = if cli.threads == 0 {
        body()
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
            Ok(pool) => pool.install(body),
            Err(e) => Err(Error::ResourceLimit(format!("thread pool: {e}"))),
        }
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::ResourceLimit(_) => 4,
                _ => 3,
            }
        }
    }
}

fn dispatch(command: Command, invocation: &str) -> Result<()> {
    match command {
        Command::Angles { ensemble, depth, starts, seed, out } => {
            let config = OptimizationConfig { starts, seed, ..OptimizationConfig::default() };
            let result = minimize_ep(&ensemble.cf(), depth, &config)?;
            let mut json = serde_json::to_value(&result)
                .map_err(|e| Error::Inconsistent(format!("result serialization: {e}")))?;
            json["invocation"] = serde_json::Value::String(invocation.to_string());
            let text = serde_json::to_string_pretty(&json)
                .map_err(|e| Error::Inconsistent(format!("result serialization: {e}")))?;
            match out {
                Some(path) => atomic_write(&path, text.as_bytes()),
                None => {
                    println!("{text}");
                    Ok(())
                }
            }
        }
        Command::Expectation { source, gammas, betas } => {
            let schedule = parse_schedule(&gammas, &betas)?;
            let value = ep_full(&source.cf()?, &schedule)?;
            println!("{value:.12e}");
            Ok(())
        }
        Command::Landscape {
            source,
            gamma_min,
            gamma_max,
            gamma_steps,
            beta_min,
            beta_max,
            beta_steps,
            out,
        } => {
            let grid = landscape_scan(
                &source.cf()?,
                GridAxis::new(gamma_min, gamma_max, gamma_steps)?,
                GridAxis::new(beta_min, beta_max, beta_steps)?,
            )?;
            let mut buf = Vec::new();
            experiments::write_landscape_csv(&mut buf, &grid, Some(invocation))?;
            atomic_write(&out, &buf)
        }
        Command::Converge { problem, depth, sizes, instances, seed, starts, out } => {
            let sizes = parse_list::<u32>(&sizes, "--sizes")?;
            let config = OptimizationConfig { starts, seed, ..OptimizationConfig::default() };
            let table =
                convergence_study(problem.into(), depth, &sizes, instances, seed, &config)?;
            let mut buf = Vec::new();
            experiments::write_convergence_csv(&mut buf, &table, Some(invocation))?;
            atomic_write(&out, &buf)
        }
        Command::Sweep { ensemble, max_depth, starts, seed, out } => {
            let config = OptimizationConfig { starts, seed, ..OptimizationConfig::default() };
            let table = depth_sweep(&ensemble.cf(), max_depth, &config)?;
            let mut buf = Vec::new();
            experiments::write_depth_sweep_csv(&mut buf, &table, Some(invocation))?;
            atomic_write(&out, &buf)
        }
        Command::Simulate { spectrum, gammas, betas, shots, seed } => {
            let spectrum = read_spectrum(&spectrum)?;
            let schedule = parse_schedule(&gammas, &betas)?;
            let state = simulator::prepare_qaoa(&spectrum, &schedule)?;
            let value = simulator::expectation(&state, &spectrum)?;
            println!("{value:.12e}");
            if let Some(shots) = shots {
                for z in simulator::sample_bitstrings(&state, seed, shots)? {
                    println!("{z}");
                }
            }
            Ok(())
        }
        Command::Spectrum { problem, n, seed, out } => {
            let kind: ProblemKind = problem.into();
            let (spectrum, values, kind_name) = match kind {
                ProblemKind::Npp => {
                    let inst = crate::problems::sample_npp(n, seed)?;
                    (crate::problems::npp_spectrum(&inst)?, inst.numbers, "npp")
                }
                ProblemKind::Rcm => {
                    let inst = crate::problems::sample_rcm(n, seed)?;
                    (crate::problems::rcm_spectrum(&inst)?, inst.weights, "rcm")
                }
            };
            let mut buf = format!("# {invocation}\n").into_bytes();
            spectrum.write(&mut buf)?;
            atomic_write(&out, &buf)?;

            let file = InstanceFile { kind: kind_name.into(), n, seed, values };
            let mut json = serde_json::to_value(&file)
                .map_err(|e| Error::Inconsistent(format!("instance serialization: {e}")))?;
            json["invocation"] = serde_json::Value::String(invocation.to_string());
            let sibling = instance_path(&out);
            atomic_write(&sibling, serde_json::to_string_pretty(&json).unwrap().as_bytes())
        }
    }
}

fn instance_path(spectrum_path: &Path) -> PathBuf {
    let mut name = spectrum_path.as_os_str().to_owned();
    name.push(".instance.json");
    PathBuf::from(name)
}

fn read_spectrum(path: &Path) -> Result<Spectrum> {
    let file = fs::File::open(path)
        .map_err(|e| Error::Parse(format!("cannot open spectrum {}: {e}", path.display())))?;
    Spectrum::read(BufReader::new(file))
}

fn parse_list<T: std::str::FromStr>(text: &str, flag: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<T>()
                .map_err(|e| Error::Parse(format!("{flag} entry `{tok}`: {e}")))
        })
        .collect()
}

fn parse_schedule(gammas: &str, betas: &str) -> Result<AngleSchedule> {
    AngleSchedule::new(parse_list(gammas, "--gammas")?, parse_list(betas, "--betas")?)
}

/// Writes the full contents to a temp file in the target directory, then
/// renames into place.
fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let write = || -> std::io::Result<()> {
        fs::write(&tmp, bytes)?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::Parse(format!(
            "cannot write {} (dir {:?}): {e}",
            path.display(),
            dir.map(Path::display).map(|d| d.to_string())
        ))
    })
}
