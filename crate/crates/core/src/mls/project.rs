use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::nnls::{solve_nnls, QuadProgram, DEFAULT_TOL};
use crate::seq::{dtft_on_grid, exp_inner_unchecked, fourier_frequency, kernel_cos, AutocovSequence};

use super::grid::AlphaGrid;
use super::measure::RepresentingMeasure;
use super::weight::WeightFunction;
use super::{MomentLsFit, Weighting};

/// Weights of the half-spectrum `j = 0..=M/2` that reproduce a full Fourier
/// grid sum of an even function.
fn half_spectrum_weights(m: usize) -> Vec<f64> {
    let half = m / 2;
    (0..=half)
        .map(|j| if j == 0 || (m % 2 == 0 && j == half) { 1.0 } else { 2.0 })
        .collect()
}

/// Quadrature assembly of the weighted program on the `M₀ = M₁` Fourier grid
/// of `weight`:
///
/// * `a_i = M₀⁻¹ Σ_j K(α_i, ω_j) r̂(ω_j) / φ(ω_j)²`
/// * `B_ij = M₁⁻¹ Σ_k K(α_i, ω_k) K(α_j, ω_k) / φ(ω_k)²`
/// * `c = M₀⁻¹ Σ_j r̂(ω_j)² / φ(ω_j)²`
///
/// `B` is formed as `GGᵀ` with `G_ik = K(α_i, ω_k) / φ(ω_k)` scaled by the
/// quadrature weight, summing only the half spectrum since every factor is
/// even on the torus.
pub fn assemble_qp(r: &AutocovSequence, grid: &AlphaGrid, weight: &WeightFunction) -> Result<QuadProgram> {
    let m0 = weight.grid_size();
    let spectrum = dtft_on_grid(r, m0)?;
    let quad = half_spectrum_weights(m0);
    let s = grid.len();
    let h = quad.len();
    let phi = weight.values();
    let rhat = spectrum.values();

    // Column-major: column k holds the scaled kernel row at frequency k.
    let mut g = DMatrix::<f64>::zeros(s, h);
    let mut rhs = vec![0.0; h];
    let mut constant = 0.0;
    for k in 0..h {
        let scale = (quad[k] / m0 as f64).sqrt() / phi[k];
        let c = fourier_frequency(k, m0).cos();
        for (i, &alpha) in grid.points().iter().enumerate() {
            g[(i, k)] = scale * kernel_cos(alpha, c);
        }
        rhs[k] = scale * rhat[k];
        constant += rhs[k] * rhs[k];
    }

    let a: Vec<f64> = (&g * DVector::from_vec(rhs)).iter().copied().collect();
    let mut b = &g * g.transpose();
    for i in 0..s {
        for j in 0..i {
            let v = 0.5 * (b[(i, j)] + b[(j, i)]);
            b[(i, j)] = v;
            b[(j, i)] = v;
        }
    }
    QuadProgram::new(a, b, constant)
}

/// Exact ℓ₂ program: `a_i = Σ_k r(k) α_i^{|k|}`, `B_ij = (1+α_iα_j)/(1-α_iα_j)`,
/// `c = ‖r‖₂²`.
pub fn unweighted_qp(r: &AutocovSequence, grid: &AlphaGrid) -> Result<QuadProgram> {
    let lags = r.lags();
    let a = grid
        .points()
        .iter()
        .map(|&alpha| {
            // Horner evaluation of Σ_{k≥1} r(k) α^k.
            let tail = lags[1..].iter().rev().fold(0.0, |acc, &v| (acc + v) * alpha);
            lags[0] + 2.0 * tail
        })
        .collect();
    let s = grid.len();
    let pts = grid.points();
    let b = DMatrix::from_fn(s, s, |i, j| exp_inner_unchecked(pts[i], pts[j]));
    QuadProgram::new(a, b, r.norm_sq())
}

/// Program for `r` under the given weighting.
pub fn build_program(r: &AutocovSequence, grid: &AlphaGrid, weighting: &Weighting) -> Result<QuadProgram> {
    match weighting {
        Weighting::Unweighted => unweighted_qp(r, grid),
        Weighting::Weighted(w) => assemble_qp(r, grid, w),
    }
}

/// Projection of `r` onto the moment sequences with representing measure
/// supported on `grid`, under `‖·‖₂` or `‖·‖_φ`.
pub fn project(r: &AutocovSequence, grid: &AlphaGrid, weighting: &Weighting) -> Result<MomentLsFit> {
    project_with_tol(r, grid, weighting, DEFAULT_TOL)
}

pub fn project_with_tol(
    r: &AutocovSequence,
    grid: &AlphaGrid,
    weighting: &Weighting,
    tol: f64,
) -> Result<MomentLsFit> {
    r.check_peaked()?;
    if let Weighting::Weighted(w) = weighting {
        if w.grid_size() < 2 * r.support_bound() {
            return Err(Error::GridTooCoarse { grid_size: w.grid_size(), lags: r.support_bound() });
        }
    }
    if r.is_zero() {
        return Ok(MomentLsFit {
            measure: RepresentingMeasure::empty(),
            delta: grid.delta(),
            weighting: weighting.clone(),
            objective: 0.0,
            kkt_residual: 0.0,
            grid_size: grid.len(),
            iterations: 0,
            degenerate: false,
            support_indices: Vec::new(),
        });
    }

    let qp = build_program(r, grid, weighting)?;
    let sol = solve_nnls(&qp, tol)?;
    let support_indices: Vec<usize> = sol.support().collect();
    let measure = RepresentingMeasure::new(
        support_indices.iter().map(|&i| grid.points()[i]).collect(),
        support_indices.iter().map(|&i| sol.weights[i]).collect(),
    )?;
    Ok(MomentLsFit {
        measure,
        delta: grid.delta(),
        weighting: weighting.clone(),
        objective: sol.objective,
        kkt_residual: sol.kkt_residual,
        grid_size: grid.len(),
        iterations: sol.iterations,
        degenerate: sol.degenerate,
        support_indices,
    })
}
