use crate::error::{Error, Result};

/// Candidate support points for the representing measure, covering
/// `[-1+δ, 1-δ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaGrid {
    points: Vec<f64>,
    delta: f64,
}

impl AlphaGrid {
    /// Arbitrary strictly increasing points inside `[-1+δ, 1-δ]`.
    pub fn from_points(points: Vec<f64>, delta: f64) -> Result<Self> {
        check_delta(delta)?;
        if points.is_empty() {
            return Err(Error::GridTooSmall(0));
        }
        if let Some(&p) = points.iter().find(|p| !(p.abs() <= 1.0 - delta)) {
            return Err(Error::AlphaOutOfRange(p));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("grid points must be strictly increasing".into()));
        }
        Ok(Self { points, delta })
    }

    /// Adds `alpha` to the grid if it is not already present.
    pub fn with_point(mut self, alpha: f64) -> Result<Self> {
        if !(alpha.abs() <= 1.0 - self.delta) {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        if let Err(pos) = self.points.binary_search_by(|p| p.total_cmp(&alpha)) {
            self.points.insert(pos, alpha);
        }
        Ok(self)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta <= 1.0 {
        Ok(())
    } else {
        Err(Error::DeltaOutOfRange(delta))
    }
}

/// `s` equally spaced points from `-1+δ` to `1-δ`. With `δ = 1` the interval
/// collapses and the grid is the single point `{0}`.
pub fn build_grid(delta: f64, s: usize) -> Result<AlphaGrid> {
    check_delta(delta)?;
    if s < 2 {
        return Err(Error::GridTooSmall(s));
    }
    if delta == 1.0 {
        return Ok(AlphaGrid { points: vec![0.0], delta });
    }
    let lo = -1.0 + delta;
    let hi = 1.0 - delta;
    let step = (hi - lo) / (s - 1) as f64;
    let mut points: Vec<f64> = (0..s).map(|i| lo + step * i as f64).collect();
    points[s - 1] = hi;
    Ok(AlphaGrid { points, delta })
}
