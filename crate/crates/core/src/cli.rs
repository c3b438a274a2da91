//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 input validation error, 3 numeric
//! failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::chains::{simulate_ar1, Ar1Spec};
use crate::error::Error;
use crate::estimator::{estimate, spectral_samples, EstimatorOptions, EstimatorReport, Method};
use crate::harness::{run_experiment, ExperimentConfig, DEFAULT_ISE_GRID, DEFAULT_REPLICATIONS};
use crate::io::{chain_to_string, pairs_to_csv, read_chain, to_json};
use crate::mls::{DeltaChoice, DEFAULT_GRID_SIZE};
use crate::seq::empirical_autocov;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "momentls", version, about = "Moment least-squares MCMC variance and spectral estimation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Empirical autocovariance of a chain as `lag,value` CSV.
    Autocov {
        input: PathBuf,
        #[arg(long)]
        column: Option<String>,
        /// Number of lags to write (default: chain length).
        #[arg(long)]
        max_lag: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Asymptotic variance estimate as a JSON report.
    Avar {
        input: PathBuf,
        #[command(flatten)]
        est: EstimatorArgs,
    },
    /// Spectral density estimate at `2πj/N`, `j = 0..=⌊N/2⌋`, as `omega,value` CSV.
    Specden {
        input: PathBuf,
        #[command(flatten)]
        est: EstimatorArgs,
        #[arg(long)]
        freqs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate a synthetic chain.
    Simulate {
        #[command(subcommand)]
        model: Model,
    },
    /// Replicated AR(1) comparison of all estimators.
    Compare {
        #[arg(long, allow_hyphen_values = true)]
        rho: f64,
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = DEFAULT_REPLICATIONS)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_ISE_GRID)]
        ise_grid: usize,
        /// Comma-separated method ids (default: all).
        #[arg(long)]
        methods: Option<String>,
        #[arg(long)]
        out: PathBuf,
        /// Also write a per-method summary table.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum Model {
    /// `X_{t+1} = ρ X_t + ε`, `ε ~ N(0, τ²)`, started from stationarity.
    Ar1 {
        #[arg(long, allow_hyphen_values = true)]
        rho: f64,
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct EstimatorArgs {
    #[arg(long)]
    method: String,
    /// `auto` or a value in (0, 1].
    #[arg(long, default_value = "auto")]
    delta: String,
    #[arg(long, default_value_t = DEFAULT_GRID_SIZE)]
    grid_size: usize,
    /// Bartlett bandwidth / OBM batch size (default ⌊√M⌋).
    #[arg(long)]
    bandwidth: Option<usize>,
    #[arg(long)]
    column: Option<String>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn parse_method(id: &str) -> CliResult<Method> {
    id.parse().map_err(|e: Error| Failure::Usage(e.to_string().trim_start_matches("invalid parameter: ").to_string()))
}

impl EstimatorArgs {
    fn options(&self) -> CliResult<EstimatorOptions> {
        if self.grid_size < 2 {
            return Err(Error::GridTooSmall(self.grid_size).into());
        }
        Ok(EstimatorOptions { delta: self.delta.parse::<DeltaChoice>()?, grid_size: self.grid_size, bandwidth: self.bandwidth })
    }
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Autocov { input, column, max_lag, out } => {
            let chain = read_chain(&input, column.as_deref())?;
            let r = empirical_autocov(&chain, max_lag.unwrap_or(chain.len()))?;
            emit(out.as_deref(), &pairs_to_csv(("lag", "value"), r.lags().iter().copied().enumerate()), stdout)
        }
        Command::Avar { input, est } => {
            let method = parse_method(&est.method)?;
            let opts = est.options()?;
            let chain = read_chain(&input, est.column.as_deref())?;
            let e = estimate(&chain, method, &opts)?;
            let report = EstimatorReport::new(&e, chain.len(), Some(input.display().to_string()), est.column.clone());
            let mut json = to_json(&report)?;
            json.push('\n');
            emit(None, &json, stdout)
        }
        Command::Specden { input, est, freqs, out } => {
            let method = parse_method(&est.method)?;
            if !method.has_spectral() {
                return Err(Failure::Usage(format!(
                    "method `{method}` has no spectral density estimate; use one of mls-w, mls-uw, bartlett, io"
                )));
            }
            if freqs == 0 {
                return Err(Failure::Usage("--freqs must be positive".into()));
            }
            let opts = est.options()?;
            let chain = read_chain(&input, est.column.as_deref())?;
            let e = estimate(&chain, method, &opts)?;
            let form = e.spectral.as_ref().expect("spectral methods carry a spectral form");
            let rows = spectral_samples(form, freqs).into_iter().map(|s| (crate::io::format_f64(s.omega), s.value));
            emit(out.as_deref(), &pairs_to_csv(("omega", "value"), rows), stdout)
        }
        Command::Simulate { model: Model::Ar1 { rho, tau, length, seed, out } } => {
            let chain = simulate_ar1(&Ar1Spec::new(rho, tau, length, seed))?;
            emit(out.as_deref(), &chain_to_string(&chain), stdout)
        }
        Command::Compare { rho, tau, length, reps, seed, ise_grid, methods, out, csv } => {
            let estimators = match methods {
                Some(list) => list.split(',').map(|s| parse_method(s.trim())).collect::<CliResult<Vec<_>>>()?,
                None => Method::ALL.to_vec(),
            };
            let config = ExperimentConfig {
                ise_grid,
                ..ExperimentConfig::new(rho, tau, length, seed).with_replications(reps).with_estimators(estimators)
            };
            let result = run_experiment(&config)?;
            let mut json = to_json(&result)?;
            json.push('\n');
            fs::write(&out, json)?;
            if let Some(path) = csv {
                fs::write(path, result.to_csv())?;
            }
            Ok(())
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
    };
    match dispatch(cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_numeric() {
                EXIT_NUMERIC
            } else {
                EXIT_VALIDATION
            }
        }
    }
}
