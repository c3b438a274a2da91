//! Replicated AR(1) experiments comparing estimators by squared avar error
//! and integrated squared spectral error.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chains::{ar1_truth, simulate_ar1, Ar1Spec, GroundTruth};
use crate::error::{Error, Result};
use crate::estimator::{estimate_all, EstimatorOptions, Method};
use crate::mls::DeltaChoice;
use crate::seq::SpectralGrid;

pub const DEFAULT_REPLICATIONS: usize = 200;
pub const DEFAULT_ISE_GRID: usize = 8192;
/// α-grid size of the moment LS fits inside experiments.
pub const HARNESS_GRID_SIZE: usize = 200;
/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "MOMENTLS_THREADS";

/// `M₀⁻¹ Σ_j (est_j - ref_j)²` over two aligned grids.
pub fn ise_between(est: &SpectralGrid, reference: &SpectralGrid) -> Result<f64> {
    if est.grid_size() != reference.grid_size() {
        return Err(Error::GridMismatch { expected: reference.grid_size(), found: est.grid_size() });
    }
    let sum: f64 = est.values().iter().zip(reference.values()).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(sum / est.grid_size() as f64)
}

/// Integrated squared error against the AR(1) spectral density on the
/// Fourier grid of `est`.
pub fn ise(est: &SpectralGrid, truth: &GroundTruth) -> Result<f64> {
    ise_between(est, &truth.spectral_grid(est.grid_size()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Template; its seed is replaced by `base_seed + r` for replicate `r`.
    pub chain: Ar1Spec,
    pub replications: usize,
    pub estimators: Vec<Method>,
    pub ise_grid: usize,
    pub base_seed: u64,
    pub options: EstimatorOptions,
}

impl ExperimentConfig {
    /// All estimators with the desk-scale defaults.
    pub fn new(rho: f64, tau: f64, length: usize, base_seed: u64) -> Self {
        Self {
            chain: Ar1Spec::new(rho, tau, length, base_seed),
            replications: DEFAULT_REPLICATIONS,
            estimators: Method::ALL.to_vec(),
            ise_grid: DEFAULT_ISE_GRID,
            base_seed,
            options: EstimatorOptions { delta: DeltaChoice::Auto, grid_size: HARNESS_GRID_SIZE, bandwidth: None },
        }
    }

    pub fn with_replications(self, replications: usize) -> Self {
        Self { replications, ..self }
    }

    pub fn with_estimators(self, estimators: Vec<Method>) -> Self {
        Self { estimators, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        self.chain.validate()?;
        if self.replications == 0 {
            return Err(Error::InvalidParameter("at least one replication is required".into()));
        }
        if self.ise_grid < 256 {
            return Err(Error::InvalidParameter(format!("ISE grid {} must be at least 256", self.ise_grid)));
        }
        if self.estimators.is_empty() {
            return Err(Error::InvalidParameter("no estimators configured".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateValue {
    pub replicate: usize,
    pub seed: u64,
    pub avar: Option<f64>,
    pub squared_error: Option<f64>,
    pub ise: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSummary {
    pub method: Method,
    pub mse: f64,
    pub mse_se: f64,
    pub mean_ise: Option<f64>,
    pub ise_se: Option<f64>,
    pub successes: usize,
    pub failures: usize,
    /// Fewer than two successful replicates, so the standard errors are
    /// reported as 0.
    pub se_undefined: bool,
    pub replicates: Vec<ReplicateValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub rho: f64,
    pub tau: f64,
    pub length: usize,
    pub replications: usize,
    pub base_seed: u64,
    pub ise_grid: usize,
    pub true_avar: f64,
    pub estimators: Vec<EstimatorSummary>,
}

impl ExperimentResult {
    pub fn get(&self, method: Method) -> Option<&EstimatorSummary> {
        self.estimators.iter().find(|e| e.method == method)
    }

    /// One row per estimator: `method,mse,mse_se,ise,ise_se,failures`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,mse,mse_se,ise,ise_se,failures\n");
        let opt = |v: Option<f64>| v.map(crate::io::format_f64).unwrap_or_default();
        for e in &self.estimators {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                e.method,
                crate::io::format_f64(e.mse),
                crate::io::format_f64(e.mse_se),
                opt(e.mean_ise),
                opt(e.ise_se),
                e.failures
            ));
        }
        out
    }
}

/// Mean and `sd/√n` (sample sd with divisor `n-1`); the second flag is set
/// when fewer than two values make the standard error undefined.
fn mean_se(values: &[f64]) -> (f64, f64, bool) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, 0.0, true);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0, true);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt(), false)
}

fn run_replicate(config: &ExperimentConfig, truth: &GroundTruth, replicate: usize) -> Vec<ReplicateValue> {
    let seed = config.base_seed.wrapping_add(replicate as u64);
    let failed = |msg: String| ReplicateValue {
        replicate,
        seed,
        avar: None,
        squared_error: None,
        ise: None,
        error: Some(msg),
    };
    let chain = match simulate_ar1(&config.chain.with_seed(seed)) {
        Ok(c) => c,
        Err(e) => return config.estimators.iter().map(|_| failed(e.to_string())).collect(),
    };
    let true_avar = truth.avar();
    let reference = truth.spectral_grid(config.ise_grid);
    estimate_all(&chain, &config.estimators, &config.options)
        .into_iter()
        .map(|res| match res {
            Ok(est) if est.avar.is_finite() => {
                let ise = est
                    .spectral
                    .as_ref()
                    .map(|s| ise_between(&s.on_grid(config.ise_grid), &reference).expect("grids share a size"));
                ReplicateValue {
                    replicate,
                    seed,
                    avar: Some(est.avar),
                    squared_error: Some((est.avar - true_avar).powi(2)),
                    ise,
                    error: None,
                }
            }
            Ok(est) => failed(format!("non-finite estimate {}", est.avar)),
            Err(e) => failed(e.to_string()),
        })
        .collect()
}

fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n: &usize| n > 0)
}

/// Runs `B` seeded replicates in parallel. Per-replicate results are
/// collected in replicate order before aggregation, so the output does not
/// depend on scheduling.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let truth = ar1_truth(config.chain.rho, config.chain.tau)?;
    let work = || -> Vec<Vec<ReplicateValue>> {
        (0..config.replications)
            .into_par_iter()
            .map(|r| run_replicate(config, &truth, r))
            .collect()
    };
    let rows = match thread_cap() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("cannot build thread pool: {e}")))?
            .install(work),
        None => work(),
    };

    let estimators = config
        .estimators
        .iter()
        .enumerate()
        .map(|(i, &method)| {
            let replicates: Vec<ReplicateValue> = rows.iter().map(|row| row[i].clone()).collect();
            let sq: Vec<f64> = replicates.iter().filter_map(|v| v.squared_error).collect();
            let ises: Vec<f64> = replicates.iter().filter_map(|v| v.ise).collect();
            let (mse, mse_se, se_undefined) = mean_se(&sq);
            let (mean_ise, ise_se) = if method.has_spectral() && !ises.is_empty() {
                let (m, s, _) = mean_se(&ises);
                (Some(m), Some(s))
            } else {
                (None, None)
            };
            EstimatorSummary {
                method,
                mse,
                mse_se,
                mean_ise,
                ise_se,
                successes: sq.len(),
                failures: replicates.len() - sq.len(),
                se_undefined,
                replicates,
            }
        })
        .collect();

    Ok(ExperimentResult {
        rho: config.chain.rho,
        tau: config.chain.tau,
        length: config.chain.length,
        replications: config.replications,
        base_seed: config.base_seed,
        ise_grid: config.ise_grid,
        true_avar: truth.avar(),
        estimators,
    })
}
