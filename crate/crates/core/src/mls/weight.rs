use crate::error::{Error, Result};
use crate::seq::fourier_frequency;

use super::measure::RepresentingMeasure;
use super::MomentLsFit;

const EVEN_TOL: f64 = 1e-10;

/// Weight `φ` sampled on the `M₀` Fourier frequencies, with bounds
/// `0 < c₀ ≤ φ ≤ c₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightFunction {
    values: Vec<f64>,
    lower: f64,
    upper: f64,
}

impl WeightFunction {
    /// `φ ≡ 1`.
    pub fn unit(grid_size: usize) -> Self {
        Self { values: vec![1.0; grid_size], lower: 1.0, upper: 1.0 }
    }

    /// Weight from grid values; bounds are the grid extrema. Values must be
    /// positive, finite and even on the torus (`φ_j = φ_{M₀-j}`); the pair
    /// average is stored so evenness holds exactly.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        let mut values = values;
        let m0 = values.len();
        if m0 == 0 {
            return Err(Error::InvalidWeight("empty grid".into()));
        }
        if let Some(j) = values.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidWeight(format!("value {} at index {j} is not positive", values[j])));
        }
        for j in 1..m0.div_ceil(2) {
            let (x, y) = (values[j], values[m0 - j]);
            if (x - y).abs() > EVEN_TOL * x.max(y) {
                return Err(Error::InvalidWeight(format!("not even: φ[{j}] = {x}, φ[{}] = {y}", m0 - j)));
            }
            let avg = 0.5 * (x + y);
            values[j] = avg;
            values[m0 - j] = avg;
        }
        let lower = values.iter().copied().fold(f64::INFINITY, f64::min);
        let upper = values.iter().copied().fold(0.0, f64::max);
        Ok(Self { values, lower, upper })
    }

    /// Evaluates an even, positive `φ` on an `m0`-point grid.
    pub fn from_fn(m0: usize, phi: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_values((0..m0).map(|j| phi(fourier_frequency(j, m0))).collect())
    }

    pub fn grid_size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn lower_bound(&self) -> f64 {
        self.lower
    }

    pub fn upper_bound(&self) -> f64 {
        self.upper
    }

    pub fn is_unit(&self) -> bool {
        self.values.iter().all(|&v| v == 1.0)
    }
}

/// Normalized spectral density of an unweighted fit, used as the weight of
/// the second-stage projection.
///
/// For total mass `m > 0`, `φ̃(ω_j) = m⁻¹ Σ_i w_i K(α_i, ω_j)` with bounds
/// `δ/(2-δ) ≤ φ̃ ≤ (2-δ)/δ`; a null fit gives `φ̃ ≡ 1`.
pub fn modified_weight(fit: &MomentLsFit, m0: usize) -> WeightFunction {
    weight_from_measure(&fit.measure, fit.delta, m0)
}

pub(crate) fn weight_from_measure(measure: &RepresentingMeasure, delta: f64, m0: usize) -> WeightFunction {
    let total = measure.total_mass();
    if total <= 0.0 {
        return WeightFunction::unit(m0);
    }
    let mut values = measure.spectral_grid(m0).into_values();
    for v in values.iter_mut() {
        *v /= total;
    }
    let observed_lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let observed_hi = values.iter().copied().fold(0.0, f64::max);
    WeightFunction {
        values,
        lower: (delta / (2.0 - delta)).min(observed_lo),
        upper: ((2.0 - delta) / delta).max(observed_hi),
    }
}
