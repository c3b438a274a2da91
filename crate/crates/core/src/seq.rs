//! Lag-domain and frequency-domain sequence primitives.
//!
//! Autocovariance sequences here are even and finitely supported, so only the
//! nonnegative lags are stored. Their Fourier transforms are real cosine
//! polynomials, evaluated on the Fourier frequencies `ω_j = 2πj/M₀`.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Relative slack allowed when checking `r(0) ≥ |r(k)|` on computed sequences.
const PEAK_SLACK: f64 = 1e-10;

/// Observed values `g(X_t)` of a chain, `t = 0..M-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainOutput {
    values: Vec<f64>,
}

impl ChainOutput {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::ChainTooShort { len: values.len(), min: 2 });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Splits into `batches` consecutive chunks of length `⌊M / batches⌋`,
    /// dropping the remainder.
    pub fn batches(&self, batches: usize) -> Result<Vec<ChainOutput>> {
        if batches == 0 {
            return Err(Error::InvalidParameter("batch count must be positive".into()));
        }
        let len = self.values.len() / batches;
        (0..batches)
            .map(|b| ChainOutput::new(self.values[b * len..(b + 1) * len].to_vec()))
            .collect()
    }

    pub fn reversed(&self) -> ChainOutput {
        let mut values = self.values.clone();
        values.reverse();
        ChainOutput { values }
    }
}

/// Even, finitely supported sequence; `lags[k]` holds the value at `±k` and
/// the sequence vanishes for `|k| ≥ lags.len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocovSequence {
    lags: Vec<f64>,
}

impl AutocovSequence {
    /// Builds a sequence from its nonnegative lags. Only finiteness is
    /// checked; use [`AutocovSequence::check_peaked`] for `r(0) ≥ |r(k)|`.
    pub fn new(lags: Vec<f64>) -> Result<Self> {
        if lags.is_empty() {
            return Err(Error::InvalidAutocov("empty sequence".into()));
        }
        if let Some(index) = lags.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { lags })
    }

    pub fn zeros(support_bound: usize) -> Self {
        Self { lags: vec![0.0; support_bound.max(1)] }
    }

    /// Number of stored lags `K`.
    pub fn support_bound(&self) -> usize {
        self.lags.len()
    }

    pub fn lags(&self) -> &[f64] {
        &self.lags
    }

    /// Value at lag `k` (any sign), zero outside the support.
    pub fn at(&self, k: i64) -> f64 {
        self.lags.get(k.unsigned_abs() as usize).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.lags.iter().all(|&v| v == 0.0)
    }

    /// `Σ_k r(k) = r(0) + 2 Σ_{k≥1} r(k)`.
    pub fn lag_sum(&self) -> f64 {
        self.lags[0] + 2.0 * self.lags[1..].iter().sum::<f64>()
    }

    /// Squared ℓ₂ norm over all integer lags.
    pub fn norm_sq(&self) -> f64 {
        self.lags[0] * self.lags[0] + 2.0 * self.lags[1..].iter().map(|v| v * v).sum::<f64>()
    }

    /// ℓ₂ inner product over all integer lags.
    pub fn inner(&self, other: &AutocovSequence) -> f64 {
        let n = self.lags.len().min(other.lags.len());
        let tail: f64 = (1..n).map(|k| self.lags[k] * other.lags[k]).sum();
        self.lags[0] * other.lags[0] + 2.0 * tail
    }

    pub fn truncated(&self, support_bound: usize) -> AutocovSequence {
        let mut lags = self.lags.clone();
        lags.truncate(support_bound.max(1));
        AutocovSequence { lags }
    }

    /// Checks `r(0) ≥ 0` and `r(0) ≥ |r(k)|` up to a small relative slack.
    pub fn check_peaked(&self) -> Result<()> {
        let r0 = self.lags[0];
        if r0 < 0.0 {
            return Err(Error::InvalidAutocov(format!("r(0) = {r0} is negative")));
        }
        let limit = r0 * (1.0 + PEAK_SLACK) + f64::MIN_POSITIVE;
        if let Some(k) = self.lags.iter().position(|v| v.abs() > limit) {
            return Err(Error::InvalidAutocov(format!(
                "|r({k})| = {} exceeds r(0) = {r0}",
                self.lags[k].abs()
            )));
        }
        Ok(())
    }
}

/// Real values of an even sequence's transform at `ω_j = 2πj/M₀`, `j = 0..M₀-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid {
    values: Vec<f64>,
}

impl SpectralGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("empty spectral grid".into()));
        }
        Ok(Self { values })
    }

    /// Evaluates `f` at each Fourier frequency of an `m0`-point grid.
    pub fn from_fn(m0: usize, f: impl Fn(f64) -> f64) -> Self {
        Self { values: (0..m0).map(|j| f(fourier_frequency(j, m0))).collect() }
    }

    pub fn grid_size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn omega(&self, j: usize) -> f64 {
        fourier_frequency(j, self.values.len())
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

pub fn fourier_frequency(j: usize, m0: usize) -> f64 {
    2.0 * PI * j as f64 / m0 as f64
}

/// Empirical autocovariance with divisor `M` for lags `0..max_lag`.
///
/// `r̃(k) = M⁻¹ Σ_{t=0}^{M-1-k} (x_t - x̄)(x_{t+k} - x̄)`, computed by FFT on a
/// zero-padded buffer of length at least `2M`.
pub fn empirical_autocov(chain: &ChainOutput, max_lag: usize) -> Result<AutocovSequence> {
    let m = chain.len();
    if max_lag == 0 || max_lag > m {
        return Err(Error::MaxLagOutOfRange { max_lag, len: m });
    }
    let mean = chain.mean();
    let n = (2 * m).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = Vec::with_capacity(n);
    buf.extend(chain.values().iter().map(|&x| Complex::new(x - mean, 0.0)));
    buf.resize(n, Complex::new(0.0, 0.0));

    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    for z in buf.iter_mut() {
        *z = Complex::new(z.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(n).process(&mut buf);

    let scale = 1.0 / (n as f64 * m as f64);
    let lags = buf[..max_lag].iter().map(|z| z.re * scale).collect();
    Ok(AutocovSequence { lags })
}

/// Full-length empirical autocovariance (`max_lag = M`).
pub fn empirical_autocov_full(chain: &ChainOutput) -> AutocovSequence {
    empirical_autocov(chain, chain.len()).expect("max_lag = M is always in range")
}

/// Cosine transform `r(0) + 2 Σ_{k=1}^{K-1} r(k) cos(k ω_j)` on the `m0`
/// Fourier frequencies, via an FFT of the symmetric extension.
pub fn dtft_on_grid(r: &AutocovSequence, m0: usize) -> Result<SpectralGrid> {
    let k = r.support_bound();
    if m0 < 2 * k {
        return Err(Error::GridTooCoarse { grid_size: m0, lags: k });
    }
    let mut buf = vec![Complex::new(0.0, 0.0); m0];
    buf[0].re = r.lags[0];
    for (lag, &v) in r.lags.iter().enumerate().skip(1) {
        buf[lag].re = v;
        buf[m0 - lag].re = v;
    }
    FftPlanner::new().plan_fft_forward(m0).process(&mut buf);

    let scale = r.lags.iter().map(|v| v.abs()).sum::<f64>() * 2.0;
    debug_assert!(
        buf.iter().all(|z| z.im.abs() <= 1e-9 * scale.max(1.0)),
        "transform of an even sequence must be real"
    );

    let mut values: Vec<f64> = buf.iter().map(|z| z.re).collect();
    for j in 1..m0.div_ceil(2) {
        let avg = 0.5 * (values[j] + values[m0 - j]);
        values[j] = avg;
        values[m0 - j] = avg;
    }
    Ok(SpectralGrid { values })
}

/// Cosine-sum evaluation at an arbitrary frequency.
pub fn cosine_sum(r: &AutocovSequence, omega: f64) -> f64 {
    r.lags[0]
        + 2.0
            * r.lags
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, v)| v * (k as f64 * omega).cos())
                .sum::<f64>()
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

/// Poisson kernel given `cos ω`; no range checks.
#[inline]
pub(crate) fn kernel_cos(alpha: f64, cos_omega: f64) -> f64 {
    (1.0 - alpha * alpha) / (1.0 - 2.0 * alpha * cos_omega + alpha * alpha)
}

/// Poisson kernel `K(α, ω) = (1-α²) / (1 - 2α cos ω + α²)`, the transform of
/// `k ↦ α^{|k|}`.
pub fn poisson_kernel(alpha: f64, omega: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(kernel_cos(alpha, omega.cos()))
}

#[inline]
pub(crate) fn exp_inner_unchecked(a: f64, b: f64) -> f64 {
    let p = a * b;
    (1.0 + p) / (1.0 - p)
}

/// ℓ₂ inner product `⟨x_α, x_α'⟩ = (1 + αα') / (1 - αα')` of two geometric
/// sequences `x_α(k) = α^{|k|}`.
pub fn exp_inner(alpha: f64, alpha2: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_alpha(alpha2)?;
    Ok(exp_inner_unchecked(alpha, alpha2))
}

/// `‖x_α‖₁ = (1 + |α|) / (1 - |α|)`.
pub fn x_alpha_l1(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let a = alpha.abs();
    Ok((1.0 + a) / (1.0 - a))
}

/// Geometric sequence `α^k`, `k = 0..support_bound`.
pub fn x_alpha(alpha: f64, support_bound: usize) -> Result<AutocovSequence> {
    check_alpha(alpha)?;
    let mut lags = Vec::with_capacity(support_bound.max(1));
    let mut p = 1.0;
    for _ in 0..support_bound.max(1) {
        lags.push(p);
        p *= alpha;
    }
    Ok(AutocovSequence { lags })
}
