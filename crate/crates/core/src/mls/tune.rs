use crate::error::{Error, Result};
use crate::seq::{empirical_autocov_full, ChainOutput};

use super::{build_grid, project, Weighting};

/// Number of batches used when δ is tuned automatically.
pub const DEFAULT_BATCHES: usize = 5;
/// Smallest δ returned by [`tune_delta`].
pub const MIN_DELTA: f64 = 1e-3;
/// Shrinkage applied to the averaged batch estimate.
pub const DELTA_SHRINK: f64 = 0.8;
/// Grid size of the per-batch projections.
pub const BATCH_GRID_SIZE: usize = 400;

/// Estimate of the gap between the support of the representing measure and
/// `±1` from a single batch.
///
/// Projects the batch autocovariance (unweighted) onto a grid with floor
/// `δ₀ = max(10⁻³, n^{-1/2})` and returns `1 - max |α|` over the fitted
/// support, or 1 for a null fit.
pub fn batch_delta(batch: &ChainOutput) -> Result<f64> {
    let floor = (1.0 / (batch.len() as f64).sqrt()).max(MIN_DELTA);
    let r = empirical_autocov_full(batch);
    let grid = build_grid(floor, BATCH_GRID_SIZE)?;
    let fit = project(&r, &grid, &Weighting::Unweighted)?;
    Ok(fit
        .measure
        .support()
        .iter()
        .map(|a| 1.0 - a.abs())
        .fold(1.0_f64, f64::min))
}

/// `0.8 · mean_l δ̂⁽ˡ⁾` over `batches` consecutive batches of length
/// `⌊M / batches⌋`, clamped to `[10⁻³, 1]`.
pub fn tune_delta(chain: &ChainOutput, batches: usize) -> Result<f64> {
    if batches == 0 {
        return Err(Error::InvalidParameter("batch count must be positive".into()));
    }
    if chain.len() < 10 * batches {
        return Err(Error::ChainTooShort { len: chain.len(), min: 10 * batches });
    }
    let estimates = chain
        .batches(batches)?
        .iter()
        .map(batch_delta)
        .collect::<Result<Vec<_>>>()?;
    let mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
    Ok((DELTA_SHRINK * mean).clamp(MIN_DELTA, 1.0))
}
