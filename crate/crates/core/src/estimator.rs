//! Uniform front end over the moment LS fits and the baseline estimators.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baselines::{
    default_bandwidth, initial_seq, obm, politis_bandwidth, windowed_autocov, InitSeqVariant, WindowKind, WindowSpec,
};
use crate::error::{Error, Result};
use crate::mls::{fit_pair, fit_pipeline, DeltaChoice, MomentLsFit, Mode, RepresentingMeasure, DEFAULT_GRID_SIZE};
use crate::seq::{cosine_sum, dtft_on_grid, empirical_autocov_full, AutocovSequence, ChainOutput, SpectralGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "mls-w")]
    MlsW,
    #[serde(rename = "mls-uw")]
    MlsUw,
    #[serde(rename = "bartlett")]
    Bartlett,
    #[serde(rename = "io")]
    Io,
    #[serde(rename = "obm")]
    Obm,
    #[serde(rename = "init-pos")]
    InitPos,
    #[serde(rename = "init-dec")]
    InitDec,
    #[serde(rename = "init-conv")]
    InitConv,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::MlsW,
        Method::MlsUw,
        Method::Bartlett,
        Method::Io,
        Method::Obm,
        Method::InitPos,
        Method::InitDec,
        Method::InitConv,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Method::MlsW => "mls-w",
            Method::MlsUw => "mls-uw",
            Method::Bartlett => "bartlett",
            Method::Io => "io",
            Method::Obm => "obm",
            Method::InitPos => "init-pos",
            Method::InitDec => "init-dec",
            Method::InitConv => "init-conv",
        }
    }

    /// Whether the method produces a spectral density estimate.
    pub fn has_spectral(self) -> bool {
        matches!(self, Method::MlsW | Method::MlsUw | Method::Bartlett | Method::Io)
    }

    pub fn valid_ids() -> String {
        Method::ALL.iter().map(|m| m.id()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .iter()
            .copied()
            .find(|m| m.id() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown method `{s}`; valid methods: {}", Method::valid_ids())))
    }
}

/// Tuning knobs shared by all estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorOptions {
    pub delta: DeltaChoice,
    /// α-grid size of the moment LS fits.
    pub grid_size: usize,
    /// Bandwidth for `bartlett` and batch size for `obm`; `⌊√M⌋` when unset.
    /// `io` always picks its own.
    pub bandwidth: Option<usize>,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        Self { delta: DeltaChoice::Auto, grid_size: DEFAULT_GRID_SIZE, bandwidth: None }
    }
}

/// Spectral density carried by an estimate.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralForm {
    Measure(RepresentingMeasure),
    /// Cosine sum of a windowed autocovariance.
    Lags(AutocovSequence),
}

impl SpectralForm {
    pub fn eval(&self, omega: f64) -> f64 {
        match self {
            SpectralForm::Measure(m) => m.spectral_density(omega),
            SpectralForm::Lags(r) => cosine_sum(r, omega),
        }
    }

    /// Values at `ω_j = 2πj/M₀`, `j = 0..M₀`.
    pub fn on_grid(&self, m0: usize) -> SpectralGrid {
        match self {
            SpectralForm::Measure(m) => m.spectral_grid(m0),
            SpectralForm::Lags(r) => match dtft_on_grid(r, m0) {
                Ok(g) => g,
                Err(_) => SpectralGrid::from_fn(m0, |w| cosine_sum(r, w)),
            },
        }
    }
}

pub const FLAG_NEGATIVE: &str = "negative_estimate";
pub const FLAG_DEGENERATE: &str = "degenerate";
pub const FLAG_SOLVER_DEGENERATE: &str = "solver_degenerate";

#[derive(Debug, Clone)]
pub struct Estimate {
    pub method: Method,
    pub avar: f64,
    pub bandwidth: Option<usize>,
    pub fit: Option<MomentLsFit>,
    pub spectral: Option<SpectralForm>,
    pub flags: Vec<&'static str>,
}

impl Estimate {
    fn baseline(method: Method, avar: f64, bandwidth: Option<usize>) -> Self {
        Self { method, avar, bandwidth, fit: None, spectral: None, flags: Vec::new() }
    }

    fn from_fit(method: Method, fit: MomentLsFit) -> Self {
        let flags = if fit.degenerate { vec![FLAG_SOLVER_DEGENERATE] } else { Vec::new() };
        Self {
            method,
            avar: fit.avar(),
            bandwidth: None,
            spectral: Some(SpectralForm::Measure(fit.measure.clone())),
            fit: Some(fit),
            flags,
        }
    }
}

fn windowed(method: Method, r: &AutocovSequence, spec: WindowSpec) -> Estimate {
    let rw = windowed_autocov(r, &spec);
    let avar = rw.lag_sum();
    let mut est = Estimate::baseline(method, avar, Some(spec.bandwidth()));
    if avar < 0.0 {
        est.flags.push(FLAG_NEGATIVE);
    }
    est.spectral = Some(SpectralForm::Lags(rw));
    est
}

fn check_bandwidth(b: usize, m: usize) -> Result<usize> {
    if b == 0 || b >= m {
        return Err(Error::InvalidParameter(format!("bandwidth {b} must lie in 1..{m}")));
    }
    Ok(b)
}

/// Runs several estimators on one chain, sharing the autocovariance and a
/// single unweighted/weighted fit pair between them.
pub fn estimate_all(chain: &ChainOutput, methods: &[Method], opts: &EstimatorOptions) -> Vec<Result<Estimate>> {
    let m = chain.len();
    let r = empirical_autocov_full(chain);
    let bandwidth = opts.bandwidth.unwrap_or_else(|| default_bandwidth(m));

    let (mut uw, mut w) = (None, None);
    if methods.contains(&Method::MlsW) {
        match fit_pair(chain, opts.delta, opts.grid_size) {
            Ok(pair) => {
                uw = Some(Ok(pair.unweighted));
                w = Some(Ok(pair.weighted));
            }
            Err(e) => w = Some(Err(e)),
        }
    }

    let mut out = Vec::with_capacity(methods.len());
    for &method in methods {
        let est = match method {
            Method::MlsW => w
                .take()
                .unwrap_or_else(|| fit_pipeline(chain, opts.delta, opts.grid_size, Mode::Weighted))
                .map(|f| Estimate::from_fit(method, f)),
            Method::MlsUw => uw
                .take()
                .unwrap_or_else(|| fit_pipeline(chain, opts.delta, opts.grid_size, Mode::Unweighted))
                .map(|f| Estimate::from_fit(method, f)),
            _ => baseline(chain, &r, method, bandwidth),
        };
        out.push(est);
    }
    out
}

fn baseline(chain: &ChainOutput, r: &AutocovSequence, method: Method, bandwidth: usize) -> Result<Estimate> {
    let m = chain.len();
    match method {
        Method::Bartlett => {
            let b = check_bandwidth(bandwidth, m)?;
            Ok(windowed(method, r, WindowSpec::new(WindowKind::Bartlett, b)?))
        }
        Method::Io => {
            let b = politis_bandwidth(r, m)?;
            Ok(windowed(method, r, WindowSpec::new(WindowKind::Trapezoid, b)?))
        }
        Method::Obm => {
            let b = check_bandwidth(bandwidth, m)?;
            Ok(Estimate::baseline(method, obm(chain, b)?, Some(b)))
        }
        Method::InitPos | Method::InitDec | Method::InitConv => {
            let variant = match method {
                Method::InitPos => InitSeqVariant::Pos,
                Method::InitDec => InitSeqVariant::Dec,
                _ => InitSeqVariant::Conv,
            };
            let s = initial_seq(r, variant)?;
            let mut est = Estimate::baseline(method, s.avar, None);
            if s.degenerate {
                est.flags.push(FLAG_DEGENERATE);
            }
            Ok(est)
        }
        Method::MlsW | Method::MlsUw => unreachable!("moment LS fits are handled by the caller"),
    }
}

pub fn estimate(chain: &ChainOutput, method: Method, opts: &EstimatorOptions) -> Result<Estimate> {
    estimate_all(chain, &[method], opts).pop().expect("one method requested")
}

/// `(ω, φ̂(ω))` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralSample {
    pub omega: f64,
    pub value: f64,
}

/// Serialized result of one estimator run on a chain. Measure fields are
/// null for the baseline estimators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorReport {
    pub method: Method,
    pub avar: f64,
    #[serde(rename = "M")]
    pub m: usize,
    pub source: Option<String>,
    pub column: Option<String>,
    pub bandwidth: Option<usize>,
    pub flags: Vec<String>,
    pub delta: Option<f64>,
    pub mode: Option<Mode>,
    pub support: Option<Vec<f64>>,
    pub masses: Option<Vec<f64>>,
    pub objective: Option<f64>,
    pub kkt_residual: Option<f64>,
    pub l1_norm: Option<f64>,
    pub spectral: Option<Vec<SpectralSample>>,
}

impl EstimatorReport {
    pub fn new(est: &Estimate, m: usize, source: Option<String>, column: Option<String>) -> Self {
        let summary = est.fit.as_ref().map(MomentLsFit::summary);
        Self {
            method: est.method,
            avar: est.avar,
            m,
            source,
            column,
            bandwidth: est.bandwidth,
            flags: est.flags.iter().map(|f| f.to_string()).collect(),
            delta: summary.as_ref().map(|s| s.delta),
            mode: summary.as_ref().map(|s| s.mode),
            support: summary.as_ref().map(|s| s.support.clone()),
            masses: summary.as_ref().map(|s| s.masses.clone()),
            objective: summary.as_ref().map(|s| s.objective),
            kkt_residual: summary.as_ref().map(|s| s.kkt_residual),
            l1_norm: summary.as_ref().map(|s| s.l1_norm),
            spectral: None,
        }
    }

    pub fn with_spectral(mut self, samples: Vec<SpectralSample>) -> Self {
        self.spectral = Some(samples);
        self
    }
}

/// `φ̂(2πj/n)` for `j = 0..=⌊n/2⌋`.
pub fn spectral_samples(form: &SpectralForm, n: usize) -> Vec<SpectralSample> {
    (0..=n / 2)
        .map(|j| {
            let omega = crate::seq::fourier_frequency(j, n);
            SpectralSample { omega, value: form.eval(omega) }
        })
        .collect()
}
