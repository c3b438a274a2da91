//! Moment least-squares estimation of the asymptotic variance and spectral
//! density of reversible Markov chain output.
//!
//! The empirical autocovariance of a chain is projected onto the set of
//! mixtures of geometric sequences `α^|k|`, `α ∈ [-1+δ, 1-δ]`, by solving a
//! nonnegative least-squares problem over a grid of `α` values. The fitted
//! mixture gives a nonnegative spectral density and an asymptotic variance in
//! closed form. Classical estimators ([`baselines`]) and a replicated AR(1)
//! comparison ([`harness`]) are included.
//!
//! ```
//! use momentls::chains::{simulate_ar1, Ar1Spec};
//! use momentls::estimator::{estimate, EstimatorOptions, Method};
//!
//! let chain = simulate_ar1(&Ar1Spec::new(0.5, 1.0, 2000, 1)).unwrap();
//! let est = estimate(&chain, Method::MlsW, &EstimatorOptions::default()).unwrap();
//! assert!(est.avar > 0.0);
//! ```
//!
//! Runnable examples live in `examples/`: `exact_recovery`, `ar1_avar`,
//! `weighted_vs_unweighted`, `spectral_density`, `baselines`, `nnls_solver`,
//! `tune_delta` and `compare_table`.

pub mod baselines;
pub mod chains;
pub mod cli;
pub mod error;
pub mod estimator;
pub mod harness;
pub mod io;
pub mod mls;
pub mod nnls;
pub mod seq;

pub use error::{Error, Result};
