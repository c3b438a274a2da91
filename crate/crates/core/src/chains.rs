//! Seeded AR(1) chains with closed-form ground truth.
//!
//! Randomness comes from `ChaCha8Rng::seed_from_u64(seed)` with standard
//! normal variates drawn by `rand_distr`'s ziggurat sampler. The stream is
//! reproducible for a fixed seed and fixed crate versions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::seq::{kernel_cos, ChainOutput, SpectralGrid};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ar1Init {
    /// `X₀ ~ N(0, τ²/(1-ρ²))`.
    Stationary,
    Fixed(f64),
}

/// `X_{t+1} = ρ X_t + ε_{t+1}`, `ε ~ N(0, τ²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ar1Spec {
    pub rho: f64,
    pub tau: f64,
    pub length: usize,
    pub seed: u64,
    pub init: Ar1Init,
}

impl Ar1Spec {
    pub fn new(rho: f64, tau: f64, length: usize, seed: u64) -> Self {
        Self { rho, tau, length, seed, init: Ar1Init::Stationary }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn with_length(self, length: usize) -> Self {
        Self { length, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        check_params(self.rho, self.tau)?;
        if self.length < 2 {
            return Err(Error::ChainTooShort { len: self.length, min: 2 });
        }
        if let Ar1Init::Fixed(x) = self.init {
            if !x.is_finite() {
                return Err(Error::InvalidParameter(format!("initial value {x} is not finite")));
            }
        }
        Ok(())
    }
}

fn check_params(rho: f64, tau: f64) -> Result<()> {
    if !(rho.abs() < 1.0) {
        return Err(Error::InvalidParameter(format!("rho = {rho} must lie in (-1, 1)")));
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter(format!("tau = {tau} must be positive")));
    }
    Ok(())
}

pub fn simulate_ar1(spec: &Ar1Spec) -> Result<ChainOutput> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut normal = || -> f64 { StandardNormal.sample(&mut rng) };
    let mut x = match spec.init {
        Ar1Init::Stationary => normal() * spec.tau / (1.0 - spec.rho * spec.rho).sqrt(),
        Ar1Init::Fixed(x0) => x0,
    };
    let mut values = Vec::with_capacity(spec.length);
    values.push(x);
    for _ in 1..spec.length {
        x = spec.rho * x + spec.tau * normal();
        values.push(x);
    }
    ChainOutput::new(values)
}

/// Exact autocovariance, spectral density and asymptotic variance of a
/// stationary AR(1) chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundTruth {
    rho: f64,
    tau: f64,
}

impl GroundTruth {
    /// `τ² / (1-ρ)²`.
    pub fn avar(&self) -> f64 {
        self.tau * self.tau / ((1.0 - self.rho) * (1.0 - self.rho))
    }

    /// `τ² / (1 - 2ρ cos ω + ρ²)`.
    pub fn spectral(&self, omega: f64) -> f64 {
        self.tau * self.tau / (1.0 - 2.0 * self.rho * omega.cos() + self.rho * self.rho)
    }

    /// `τ² ρ^{|k|} / (1-ρ²)`.
    pub fn autocov(&self, k: i64) -> f64 {
        self.stationary_variance() * self.rho.powi(k.unsigned_abs() as i32)
    }

    pub fn stationary_variance(&self) -> f64 {
        self.tau * self.tau / (1.0 - self.rho * self.rho)
    }

    pub fn spectral_grid(&self, m0: usize) -> SpectralGrid {
        let v = self.stationary_variance();
        SpectralGrid::from_fn(m0, |w| v * kernel_cos(self.rho, w.cos()))
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

pub fn ar1_truth(rho: f64, tau: f64) -> Result<GroundTruth> {
    check_params(rho, tau)?;
    Ok(GroundTruth { rho, tau })
}
