//! Comparison estimators: lag-window (Bartlett, trapezoidal flat-top),
//! overlapping batch means, and initial sequence estimators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::{AutocovSequence, ChainOutput};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    /// `w(k) = (1 - |k|/b) 1{|k| < b}`.
    Bartlett,
    /// `w(k) = 1{|k|/b ≤ ½} + 2(b - |k|)/b · 1{½ < |k|/b ≤ 1}`.
    Trapezoid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSpec {
    kind: WindowKind,
    bandwidth: usize,
}

impl WindowSpec {
    pub fn new(kind: WindowKind, bandwidth: usize) -> Result<Self> {
        if bandwidth == 0 {
            return Err(Error::InvalidParameter("bandwidth must be at least 1".into()));
        }
        Ok(Self { kind, bandwidth })
    }

    pub fn kind(&self) -> WindowKind {
        self.kind
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    /// Lag-window value at `k ≥ 0`.
    pub fn weight(&self, k: usize) -> f64 {
        let b = self.bandwidth as f64;
        let k = k as f64;
        match self.kind {
            WindowKind::Bartlett if k < b => 1.0 - k / b,
            WindowKind::Bartlett => 0.0,
            WindowKind::Trapezoid if k / b <= 0.5 => 1.0,
            WindowKind::Trapezoid if k / b <= 1.0 => 2.0 * (b - k) / b,
            WindowKind::Trapezoid => 0.0,
        }
    }
}

/// `ř(k) = w(k) r(k)`. Both windows vanish from lag `b` on, so the result
/// keeps `min(K, b)` lags.
pub fn windowed_autocov(r: &AutocovSequence, spec: &WindowSpec) -> AutocovSequence {
    let n = r.support_bound().min(spec.bandwidth);
    let lags = r.lags()[..n].iter().enumerate().map(|(k, v)| spec.weight(k) * v).collect();
    AutocovSequence::new(lags).expect("windowed lags are finite")
}

/// `ř(0) + 2 Σ_{k≥1} ř(k)`; may be negative.
pub fn windowed_avar(r: &AutocovSequence, spec: &WindowSpec) -> f64 {
    windowed_autocov(r, spec).lag_sum()
}

/// Multiplier on the noise band `√(log₁₀ M / M)`.
pub const POLITIS_C: f64 = 2.0;
/// Consecutive lags that must fall inside the band.
pub const POLITIS_RUN: usize = 5;

/// Empirical bandwidth rule for the flat-top window: `b = max(2k̂, 2)` with
/// `k̂` the first lag after which the next `min(5, K-1-k)` autocorrelations
/// stay below `2√(log₁₀ M / M)` in absolute value.
pub fn politis_bandwidth(r: &AutocovSequence, m: usize) -> Result<usize> {
    if m < 4 {
        return Err(Error::ChainTooShort { len: m, min: 4 });
    }
    let r0 = r.lags()[0];
    if !(r0 > 0.0) {
        return Err(Error::InvalidAutocov(format!("r(0) = {r0} must be positive")));
    }
    let mf = m as f64;
    let threshold = POLITIS_C * (mf.log10() / mf).sqrt();
    let k_len = r.support_bound();
    let rho = |k: usize| r.lags()[k] / r0;
    let k_hat = (1..k_len)
        .find(|&k| {
            let run = POLITIS_RUN.min(k_len - 1 - k);
            (1..=run).all(|j| rho(k + j).abs() < threshold)
        })
        .unwrap_or(k_len.saturating_sub(1));
    Ok((2 * k_hat).max(2))
}

/// Overlapping batch means with batch size `b`:
/// `M b / ((M-b)(M-b+1)) Σ_{j=0}^{M-b} (Ȳ_j - Ȳ)²`.
pub fn obm(chain: &ChainOutput, b: usize) -> Result<f64> {
    let m = chain.len();
    if b == 0 || b >= m {
        return Err(Error::InvalidParameter(format!("batch size {b} must lie in 1..{m}")));
    }
    let mean = chain.mean();
    let mut prefix = Vec::with_capacity(m + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for &x in chain.values() {
        acc += x - mean;
        prefix.push(acc);
    }
    let bf = b as f64;
    let ss: f64 = (0..=m - b)
        .map(|j| {
            let d = (prefix[j + b] - prefix[j]) / bf;
            d * d
        })
        .sum();
    let (mf, n) = (m as f64, (m - b) as f64);
    Ok(mf * bf / (n * (n + 1.0)) * ss)
}

/// Default batch size / bandwidth `⌊√M⌋`.
pub fn default_bandwidth(m: usize) -> usize {
    ((m as f64).sqrt().floor() as usize).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitSeqVariant {
    Pos,
    Dec,
    Conv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitSeqEstimate {
    pub avar: f64,
    /// Truncated (and, for `Dec`/`Conv`, minorant-adjusted) paired sums.
    pub gammas: Vec<f64>,
    /// `Γ₀ ≤ 0`; the estimate fell back to `max(-r(0), 0)`.
    pub degenerate: bool,
}

/// Paired lag sums `Γ_m = r(2m) + r(2m+1)` for `m = 0..=⌊(K-2)/2⌋`.
pub fn paired_sums(r: &AutocovSequence) -> Vec<f64> {
    r.lags().chunks_exact(2).map(|p| p[0] + p[1]).collect()
}

/// Greatest convex minorant of a sequence on equally spaced abscissae,
/// via pool-adjacent-violators on successive differences.
pub fn convex_minorant(seq: &[f64]) -> Vec<f64> {
    if seq.len() <= 2 {
        return seq.to_vec();
    }
    // Blocks of (sum of differences, count); block means must be nondecreasing.
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(seq.len() - 1);
    for w in seq.windows(2) {
        blocks.push((w[1] - w[0], 1));
        while blocks.len() >= 2 {
            let (s2, n2) = blocks[blocks.len() - 1];
            let (s1, n1) = blocks[blocks.len() - 2];
            if s1 / n1 as f64 > s2 / n2 as f64 {
                blocks.pop();
                *blocks.last_mut().expect("two blocks present") = (s1 + s2, n1 + n2);
            } else {
                break;
            }
        }
    }
    let mut out = Vec::with_capacity(seq.len());
    out.push(seq[0]);
    let mut level = seq[0];
    for (sum, n) in blocks {
        let slope = sum / n as f64;
        for _ in 0..n {
            level += slope;
            // Accumulated rounding must not lift the hull above the input.
            out.push(level.min(seq[out.len()]));
        }
    }
    out
}

/// Initial positive / monotone / convex sequence estimators.
pub fn initial_seq(r: &AutocovSequence, variant: InitSeqVariant) -> Result<InitSeqEstimate> {
    if r.support_bound() < 2 {
        return Err(Error::InvalidAutocov("initial sequence estimators need at least 2 lags".into()));
    }
    let r0 = r.lags()[0];
    let all = paired_sums(r);
    let keep = all.iter().take_while(|&&g| g > 0.0).count();
    if keep == 0 {
        return Ok(InitSeqEstimate { avar: (-r0).max(0.0), gammas: Vec::new(), degenerate: true });
    }
    let mut gammas = all[..keep].to_vec();
    if matches!(variant, InitSeqVariant::Dec | InitSeqVariant::Conv) {
        for i in 1..gammas.len() {
            gammas[i] = gammas[i].min(gammas[i - 1]);
        }
    }
    if variant == InitSeqVariant::Conv {
        gammas = convex_minorant(&gammas);
    }
    let avar = -r0 + 2.0 * gammas.iter().sum::<f64>();
    Ok(InitSeqEstimate { avar, gammas, degenerate: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alt() -> AutocovSequence {
        AutocovSequence::new(vec![1.0, -0.75, 0.5, -0.25]).unwrap()
    }

    #[test]
    fn bartlett_unit_bandwidth() {
        let spec = WindowSpec::new(WindowKind::Bartlett, 1).unwrap();
        assert_eq!(windowed_autocov(&alt(), &spec).lags(), &[1.0]);
        assert_eq!(windowed_avar(&alt(), &spec), 1.0);
    }

    #[test]
    fn bartlett_b2() {
        let spec = WindowSpec::new(WindowKind::Bartlett, 2).unwrap();
        assert_eq!(windowed_autocov(&alt(), &spec).lags(), &[1.0, -0.375]);
        assert_eq!(windowed_avar(&alt(), &spec), 0.25);
    }

    #[test]
    fn trapezoid_b2() {
        let spec = WindowSpec::new(WindowKind::Trapezoid, 2).unwrap();
        assert_eq!(windowed_autocov(&alt(), &spec).lags(), &[1.0, -0.75]);
        assert_eq!(windowed_avar(&alt(), &spec), -0.5);
    }

    #[test]
    fn trapezoid_shape() {
        let spec = WindowSpec::new(WindowKind::Trapezoid, 10).unwrap();
        let w: Vec<f64> = (0..12).map(|k| spec.weight(k)).collect();
        assert_eq!(&w[..6], &[1.0; 6]);
        assert!((w[6] - 0.8).abs() < 1e-15);
        assert!((w[9] - 0.2).abs() < 1e-15);
        assert_eq!(w[10], 0.0);
        assert_eq!(w[11], 0.0);
    }

    #[test]
    fn zero_bandwidth_rejected() {
        assert!(WindowSpec::new(WindowKind::Bartlett, 0).is_err());
    }

    #[test]
    fn politis_white_noise() {
        let mut lags = vec![0.0; 50];
        lags[0] = 1.0;
        let r = AutocovSequence::new(lags).unwrap();
        assert_eq!(politis_bandwidth(&r, 10_000).unwrap(), 2);
    }

    #[test]
    fn politis_geometric() {
        // 0.9^31 ≈ 0.038 is the first power below 2√(4/10⁴) = 0.04, so k̂ = 30.
        let r = AutocovSequence::new((0..200).map(|k| 0.9_f64.powi(k)).collect()).unwrap();
        assert_eq!(politis_bandwidth(&r, 10_000).unwrap(), 60);
    }

    #[test]
    fn politis_errors() {
        let r = AutocovSequence::new(vec![0.0, 0.0]).unwrap();
        assert!(politis_bandwidth(&r, 100).is_err());
        let r = AutocovSequence::new(vec![1.0, 0.0]).unwrap();
        assert!(politis_bandwidth(&r, 3).is_err());
    }

    #[test]
    fn politis_never_settles() {
        let r = AutocovSequence::new(vec![1.0; 8]).unwrap();
        assert_eq!(politis_bandwidth(&r, 100).unwrap(), 14);
    }

    #[test]
    fn obm_simple_cases() {
        let c = ChainOutput::new(vec![4.0; 20]).unwrap();
        assert_eq!(obm(&c, 5).unwrap(), 0.0);
        let c = ChainOutput::new(vec![1.0, -1.0, 1.0, -1.0]).unwrap();
        assert_eq!(obm(&c, 2).unwrap(), 0.0);
        assert!(obm(&c, 4).is_err());
        assert!(obm(&c, 0).is_err());
    }

    #[test]
    fn obm_matches_direct_formula() {
        let x: Vec<f64> = (0..50).map(|t| ((t * 37) % 11) as f64 - 5.0).collect();
        let c = ChainOutput::new(x.clone()).unwrap();
        let (m, b) = (50usize, 7usize);
        let mean = x.iter().sum::<f64>() / m as f64;
        let ss: f64 = (0..=m - b)
            .map(|j| {
                let y = x[j..j + b].iter().sum::<f64>() / b as f64;
                (y - mean).powi(2)
            })
            .sum();
        let direct = (m * b) as f64 / (((m - b) * (m - b + 1)) as f64) * ss;
        assert!((obm(&c, b).unwrap() - direct).abs() < 1e-12 * direct);
    }

    #[test]
    fn initial_seq_white_noise() {
        let r = AutocovSequence::new(vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        for v in [InitSeqVariant::Pos, InitSeqVariant::Dec, InitSeqVariant::Conv] {
            let est = initial_seq(&r, v).unwrap();
            assert_eq!(est.avar, 1.0);
            assert!(!est.degenerate);
        }
    }

    #[test]
    fn initial_seq_geometric() {
        let r = AutocovSequence::new((0..200).map(|k| 0.5_f64.powi(k)).collect()).unwrap();
        for v in [InitSeqVariant::Pos, InitSeqVariant::Dec, InitSeqVariant::Conv] {
            assert!((initial_seq(&r, v).unwrap().avar - 3.0).abs() < 1e-6);
        }
    }

    #[test]
    fn initial_seq_truncation_and_degeneracy() {
        let r = AutocovSequence::new(vec![1.0, -1.2, 0.5, 0.1, -0.4, 0.1]).unwrap();
        let est = initial_seq(&r, InitSeqVariant::Pos).unwrap();
        assert!(est.degenerate);
        assert_eq!(est.avar, 0.0);

        let r = AutocovSequence::new(vec![1.0, 0.5, 0.3, 0.1, -0.4, 0.1, 0.3, 0.2]).unwrap();
        let est = initial_seq(&r, InitSeqVariant::Pos).unwrap();
        assert_eq!(est.gammas.len(), 2);
        assert!((est.avar - (-1.0 + 2.0 * (1.5 + 0.4))).abs() < 1e-15);
        assert!(initial_seq(&AutocovSequence::new(vec![1.0]).unwrap(), InitSeqVariant::Pos).is_err());
    }

    #[test]
    fn minorant_examples() {
        assert_eq!(convex_minorant(&[3.0, 1.0, 0.5]), vec![3.0, 1.0, 0.5]);
        let g = convex_minorant(&[1.0, 0.9, 0.2, 0.1]);
        // Hull through (0,1) and (2,0.2) then (3,0.1).
        assert!((g[1] - 0.6).abs() < 1e-15);
        assert!((g[3] - 0.1).abs() < 1e-15);
    }
}
