use crate::error::{Error, Result};
use crate::seq::{fourier_frequency, kernel_cos, AutocovSequence, SpectralGrid};

/// Discrete nonnegative measure on `(-1, 1)`; the moment sequence it
/// represents is `f(k) = Σ_i w_i α_i^{|k|}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RepresentingMeasure {
    support: Vec<f64>,
    masses: Vec<f64>,
}

impl RepresentingMeasure {
    pub fn new(support: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        if support.len() != masses.len() {
            return Err(Error::InvalidParameter(format!(
                "{} support points but {} masses",
                support.len(),
                masses.len()
            )));
        }
        if let Some(&a) = support.iter().find(|a| !(a.abs() < 1.0)) {
            return Err(Error::AlphaOutOfRange(a));
        }
        if let Some(&m) = masses.iter().find(|m| !(m.is_finite() && **m > 0.0)) {
            return Err(Error::InvalidParameter(format!("mass {m} is not positive")));
        }
        Ok(Self { support, masses })
    }

    /// The null measure (zero sequence).
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.support.iter().copied().zip(self.masses.iter().copied())
    }

    /// Total mass, equal to the represented sequence at lag 0.
    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// `Σ_i w_i K(α_i, ω)`.
    pub fn spectral_density(&self, omega: f64) -> f64 {
        let c = omega.cos();
        self.atoms().map(|(a, w)| w * kernel_cos(a, c)).sum()
    }

    /// `Σ_i w_i (1 + α_i) / (1 - α_i)`, the sum of the represented sequence
    /// over all lags.
    pub fn asymptotic_variance(&self) -> f64 {
        self.atoms().map(|(a, w)| w * (1.0 + a) / (1.0 - a)).sum()
    }

    /// ℓ₁ norm of the represented sequence, `Σ_i w_i (1 + |α_i|) / (1 - |α_i|)`.
    pub fn l1_norm(&self) -> f64 {
        self.atoms().map(|(a, w)| w * (1.0 + a.abs()) / (1.0 - a.abs())).sum()
    }

    /// Represented sequence at lags `0..support_bound`.
    pub fn autocov(&self, support_bound: usize) -> AutocovSequence {
        let n = support_bound.max(1);
        let mut lags = vec![0.0; n];
        for (a, w) in self.atoms() {
            let mut p = w;
            for v in lags.iter_mut() {
                *v += p;
                p *= a;
                if p == 0.0 {
                    break;
                }
            }
        }
        AutocovSequence::new(lags).expect("moment sequence is finite")
    }

    /// Spectral density on the `m0` Fourier frequencies.
    pub fn spectral_grid(&self, m0: usize) -> SpectralGrid {
        let half = m0 / 2;
        let mut values = vec![0.0; m0];
        for j in 0..=half.min(m0 - 1) {
            let c = fourier_frequency(j, m0).cos();
            values[j] = self.atoms().map(|(a, w)| w * kernel_cos(a, c)).sum();
        }
        for j in half + 1..m0 {
            values[j] = values[m0 - j];
        }
        SpectralGrid::new(values).expect("grid size is positive")
    }
}

/// Spectral density `Σ_i w_i K(α_i, ω)` of the represented sequence.
pub fn spectral_density(measure: &RepresentingMeasure, omega: f64) -> f64 {
    measure.spectral_density(omega)
}

/// Asymptotic variance `Σ_i w_i (1 + α_i) / (1 - α_i)`.
pub fn asymptotic_variance(measure: &RepresentingMeasure) -> f64 {
    measure.asymptotic_variance()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ar1_measure() -> RepresentingMeasure {
        RepresentingMeasure::new(vec![0.9], vec![1.0 / (1.0 - 0.81)]).unwrap()
    }

    #[test]
    fn point_mass_at_zero_is_flat() {
        let m = RepresentingMeasure::new(vec![0.0], vec![2.5]).unwrap();
        for w in [0.0, 1.0, PI, -0.4] {
            assert_eq!(spectral_density(&m, w), 2.5);
        }
        assert_eq!(asymptotic_variance(&RepresentingMeasure::new(vec![0.0], vec![1.0]).unwrap()), 1.0);
    }

    #[test]
    fn ar1_values() {
        let m = ar1_measure();
        assert!((spectral_density(&m, 0.0) - 100.0).abs() < 1e-10);
        assert!((spectral_density(&m, PI) - 0.277_008_310_249_307_5).abs() < 1e-12);
        assert!((asymptotic_variance(&m) - 100.0).abs() < 1e-10);
    }

    #[test]
    fn null_measure() {
        let m = RepresentingMeasure::empty();
        assert_eq!(asymptotic_variance(&m), 0.0);
        assert_eq!(spectral_density(&m, 1.0), 0.0);
        assert!(m.autocov(3).is_zero());
    }

    #[test]
    fn avar_equals_density_at_zero() {
        let m = RepresentingMeasure::new(vec![-0.7, 0.1, 0.95], vec![0.3, 1.2, 0.05]).unwrap();
        let rel = (m.asymptotic_variance() - m.spectral_density(0.0)).abs() / m.asymptotic_variance();
        assert!(rel < 1e-12);
    }

    #[test]
    fn autocov_and_total_mass() {
        let m = RepresentingMeasure::new(vec![-0.5, 0.5], vec![1.0, 3.0]).unwrap();
        let r = m.autocov(4);
        assert_eq!(r.lags(), &[4.0, 1.0, 1.0, 0.25]);
        assert_eq!(m.total_mass(), r.lags()[0]);
        assert_eq!(m.l1_norm(), 12.0);
    }

    #[test]
    fn spectral_grid_matches_pointwise() {
        let m = RepresentingMeasure::new(vec![-0.3, 0.8], vec![0.4, 0.6]).unwrap();
        for m0 in [7, 16] {
            let g = m.spectral_grid(m0);
            for j in 0..m0 {
                assert!((g.values()[j] - m.spectral_density(g.omega(j))).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn validation() {
        assert!(RepresentingMeasure::new(vec![1.0], vec![1.0]).is_err());
        assert!(RepresentingMeasure::new(vec![0.1], vec![0.0]).is_err());
        assert!(RepresentingMeasure::new(vec![0.1, 0.2], vec![1.0]).is_err());
    }
}
