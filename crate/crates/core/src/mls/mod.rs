//! Moment least-squares estimation.
//!
//! An input autocovariance sequence is projected onto the cone of sequences
//! `f(k) = ∫ α^{|k|} μ(dα)` with `μ ≥ 0` supported on `[-1+δ, 1-δ]`, either in
//! the plain ℓ₂ norm or in the frequency-weighted norm
//! `‖x‖²_φ = (2π)⁻¹ ∫ |x̂(ω)|² / φ(ω)² dω`. The fitted measure gives plug-in
//! spectral density and asymptotic variance estimates in closed form.
//!
//! The two-stage estimator ([`fit_pair`]) first fits unweighted, turns that
//! fit's normalized spectral density into a weight ([`modified_weight`]) and
//! projects again under the weighted norm.

mod grid;
mod measure;
mod project;
mod tune;
mod weight;

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::{empirical_autocov_full, ChainOutput};

pub use grid::{build_grid, AlphaGrid};
pub use measure::{asymptotic_variance, spectral_density, RepresentingMeasure};
pub use project::{assemble_qp, build_program, project, project_with_tol, unweighted_qp};
pub use tune::{batch_delta, tune_delta, BATCH_GRID_SIZE, DEFAULT_BATCHES, DELTA_SHRINK, MIN_DELTA};
pub use weight::{modified_weight, WeightFunction};

/// Default α-grid size for single fits.
pub const DEFAULT_GRID_SIZE: usize = 1000;

/// Norm used for a projection.
#[derive(Debug, Clone, PartialEq)]
pub enum Weighting {
    /// Plain ℓ₂ (`φ ≡ 1`), with the exact closed-form Gram matrix.
    Unweighted,
    Weighted(WeightFunction),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Weighted,
    Unweighted,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Weighted => "weighted",
            Mode::Unweighted => "unweighted",
        }
    }
}

/// δ supplied directly or tuned from the chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaChoice {
    Auto,
    Fixed(f64),
}

impl FromStr for DeltaChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(DeltaChoice::Auto);
        }
        let delta: f64 = s
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("delta must be `auto` or a number, got `{s}`")))?;
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::DeltaOutOfRange(delta));
        }
        Ok(DeltaChoice::Fixed(delta))
    }
}

/// Result of one projection.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentLsFit {
    pub measure: RepresentingMeasure,
    pub delta: f64,
    pub weighting: Weighting,
    pub objective: f64,
    pub kkt_residual: f64,
    /// Number of α-grid points.
    pub grid_size: usize,
    pub iterations: usize,
    /// The solver dropped a near-collinear grid point along the way.
    pub degenerate: bool,
    /// Grid indices carrying positive mass, ascending.
    pub support_indices: Vec<usize>,
}

impl MomentLsFit {
    pub fn mode(&self) -> Mode {
        match self.weighting {
            Weighting::Unweighted => Mode::Unweighted,
            Weighting::Weighted(_) => Mode::Weighted,
        }
    }

    pub fn avar(&self) -> f64 {
        self.measure.asymptotic_variance()
    }

    pub fn l1_norm(&self) -> f64 {
        self.measure.l1_norm()
    }

    /// Number of maximal runs of adjacent grid points carrying mass.
    pub fn support_clusters(&self) -> usize {
        self.support_indices
            .iter()
            .zip(self.support_indices.iter().skip(1))
            .filter(|(a, b)| **b != **a + 1)
            .count()
            + usize::from(!self.support_indices.is_empty())
    }

    pub fn summary(&self) -> FitSummary {
        FitSummary {
            delta: self.delta,
            mode: self.mode(),
            support: self.measure.support().to_vec(),
            masses: self.measure.masses().to_vec(),
            avar: self.avar(),
            objective: self.objective,
            kkt_residual: self.kkt_residual,
            l1_norm: self.l1_norm(),
        }
    }
}

/// Serialized form of a fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub delta: f64,
    pub mode: Mode,
    pub support: Vec<f64>,
    pub masses: Vec<f64>,
    pub avar: f64,
    pub objective: f64,
    pub kkt_residual: f64,
    pub l1_norm: f64,
}

/// Unweighted fit and the weighted fit built on it, sharing δ and grid.
#[derive(Debug, Clone)]
pub struct FitPair {
    pub unweighted: MomentLsFit,
    pub weighted: MomentLsFit,
}

/// Smallest chain accepted by [`fit_pipeline`].
pub const MIN_CHAIN_LEN: usize = 4;

fn resolve_delta(chain: &ChainOutput, delta: DeltaChoice) -> Result<f64> {
    match delta {
        DeltaChoice::Auto => tune_delta(chain, DEFAULT_BATCHES),
        DeltaChoice::Fixed(d) => Ok(d),
    }
}

fn unweighted_stage(chain: &ChainOutput, delta: DeltaChoice, grid_size: usize) -> Result<(MomentLsFit, AlphaGrid)> {
    if chain.len() < MIN_CHAIN_LEN {
        return Err(Error::ChainTooShort { len: chain.len(), min: MIN_CHAIN_LEN });
    }
    let delta = resolve_delta(chain, delta)?;
    let grid = build_grid(delta, grid_size)?;
    let r = empirical_autocov_full(chain);
    let fit = project(&r, &grid, &Weighting::Unweighted)?;
    Ok((fit, grid))
}

/// Both stages on the full empirical autocovariance, with `M₀ = 2M` for the
/// weighted quadrature.
pub fn fit_pair(chain: &ChainOutput, delta: DeltaChoice, grid_size: usize) -> Result<FitPair> {
    let (unweighted, grid) = unweighted_stage(chain, delta, grid_size)?;
    let m0 = 2 * chain.len();
    let weight = modified_weight(&unweighted, m0);
    let r = empirical_autocov_full(chain);
    let weighted = project(&r, &grid, &Weighting::Weighted(weight))?;
    Ok(FitPair { unweighted, weighted })
}

/// Fits a chain in the requested mode.
pub fn fit_pipeline(chain: &ChainOutput, delta: DeltaChoice, grid_size: usize, mode: Mode) -> Result<MomentLsFit> {
    match mode {
        Mode::Unweighted => Ok(unweighted_stage(chain, delta, grid_size)?.0),
        Mode::Weighted => Ok(fit_pair(chain, delta, grid_size)?.weighted),
    }
}
