use thiserror::Error;

use crate::nnls::QpSolution;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("chain too short: {len} values, need at least {min}")]
    ChainTooShort { len: usize, min: usize },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("max_lag {max_lag} out of range 1..={len}")]
    MaxLagOutOfRange { max_lag: usize, len: usize },

    #[error("frequency grid of size {grid_size} cannot resolve {lags} lags (need at least {})", 2 * .lags)]
    GridTooCoarse { grid_size: usize, lags: usize },

    #[error("alpha {0} outside (-1, 1)")]
    AlphaOutOfRange(f64),

    #[error("delta {0} outside (0, 1]")]
    DeltaOutOfRange(f64),

    #[error("grid needs at least 2 points, got {0}")]
    GridTooSmall(usize),

    #[error("invalid autocovariance: {0}")]
    InvalidAutocov(String),

    #[error("invalid weight function: {0}")]
    InvalidWeight(String),

    #[error("invalid quadratic program: {0}")]
    InvalidProgram(String),

    #[error("grid size mismatch: expected {expected}, found {found}")]
    GridMismatch { expected: usize, found: usize },

    #[error("solver hit iteration limit {limit} with kkt residual {}", .best.kkt_residual)]
    IterationLimit { limit: usize, best: Box<QpSolution> },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerical machinery rather than of the inputs.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::IterationLimit { .. })
    }
}
