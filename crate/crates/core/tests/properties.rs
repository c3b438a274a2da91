use std::f64::consts::PI;

use proptest::prelude::*;

use momentls::baselines::{initial_seq, obm, paired_sums, windowed_autocov, InitSeqVariant, WindowKind, WindowSpec};
use momentls::chains::ar1_truth;
use momentls::mls::{build_grid, project, RepresentingMeasure, WeightFunction, Weighting};
use momentls::nnls::{solve_nnls, QuadProgram};
use momentls::seq::{dtft_on_grid, empirical_autocov, poisson_kernel, AutocovSequence, ChainOutput};
use nalgebra::DMatrix;

fn lags(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0_f64, 1..=max_len)
}

/// Lags with `|r(k)| ≤ r(0)`.
fn peaked(max_len: usize) -> impl Strategy<Value = AutocovSequence> {
    (0.1..3.0_f64, prop::collection::vec(-1.0..1.0_f64, 0..max_len)).prop_map(|(r0, tail)| {
        let mut v = vec![r0];
        v.extend(tail.iter().map(|t| t * r0));
        AutocovSequence::new(v).unwrap()
    })
}

fn two_sided_dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).enumerate().map(|(k, (a, b))| if k == 0 { a * b } else { 2.0 * a * b }).sum()
}

fn cosine_weight(m0: usize, c: (f64, f64)) -> WeightFunction {
    WeightFunction::from_fn(m0, |w| 1.5 + c.0 * w.cos() + c.1 * (2.0 * w).cos()).unwrap()
}

proptest! {
    #[test]
    fn parseval_on_fourier_grid(x in lags(32), y in lags(32)) {
        let m0 = 4096;
        let (rx, ry) = (AutocovSequence::new(x.clone()).unwrap(), AutocovSequence::new(y.clone()).unwrap());
        let (hx, hy) = (dtft_on_grid(&rx, m0).unwrap(), dtft_on_grid(&ry, m0).unwrap());
        let freq: f64 = hx.values().iter().zip(hy.values()).map(|(a, b)| a * b).sum::<f64>() / m0 as f64;
        let lag = two_sided_dot(&x, &y);
        let scale = two_sided_dot(&x, &x).sqrt() * two_sided_dot(&y, &y).sqrt();
        prop_assert!((freq - lag).abs() <= 1e-8 * scale.max(1e-300), "{freq} vs {lag}");
    }

    #[test]
    fn dtft_grid_is_symmetric(x in lags(40), m0 in 80usize..300) {
        let g = dtft_on_grid(&AutocovSequence::new(x).unwrap(), m0).unwrap();
        for j in 1..m0 {
            prop_assert!((g.values()[j] - g.values()[m0 - j]).abs() <= 1e-12);
        }
    }

    #[test]
    fn kernel_bounds(alpha in -0.999..0.999_f64, omega in -PI..PI) {
        let k = poisson_kernel(alpha, omega).unwrap();
        let a = alpha.abs();
        // Equality is attained at ω ∈ {0, π}; allow rounding there.
        let slack = 4.0 * f64::EPSILON;
        prop_assert!(k >= (1.0 - a) / (1.0 + a) * (1.0 - slack));
        prop_assert!(k <= (1.0 + a) / (1.0 - a) * (1.0 + slack));
        prop_assert!(k > 0.0);
    }

    #[test]
    fn empirical_autocov_is_peaked(x in prop::collection::vec(-5.0..5.0_f64, 2..200)) {
        let chain = ChainOutput::new(x.clone()).unwrap();
        let r = empirical_autocov(&chain, x.len()).unwrap();
        let m = x.len() as f64;
        let mean = x.iter().sum::<f64>() / m;
        for k in 0..x.len() {
            let direct: f64 = (0..x.len() - k).map(|t| (x[t] - mean) * (x[t + k] - mean)).sum::<f64>() / m;
            prop_assert!((r.lags()[k] - direct).abs() <= 1e-10 * r.lags()[0].max(1e-12));
            prop_assert!(r.lags()[k].abs() <= r.lags()[0] * (1.0 + 1e-12) + 1e-15);
        }
    }

    #[test]
    fn norm_sandwich(x in lags(30), c in (-0.5..0.5_f64, -0.4..0.4_f64)) {
        let m0 = 1024;
        let w = cosine_weight(m0, c);
        let r = AutocovSequence::new(x.clone()).unwrap();
        let hat = dtft_on_grid(&r, m0).unwrap();
        let weighted = (hat.values().iter().zip(w.values()).map(|(h, p)| h * h / (p * p)).sum::<f64>() / m0 as f64).sqrt();
        let l2 = two_sided_dot(&x, &x).sqrt();
        let tol = 1e-10 * l2;
        prop_assert!(l2 / w.upper_bound() <= weighted + tol);
        prop_assert!(weighted <= l2 / w.lower_bound() + tol);
    }

    #[test]
    fn ar1_identities(rho in -0.99..0.99_f64, tau in 0.1..3.0_f64, omega in -PI..PI) {
        let t = ar1_truth(rho, tau).unwrap();
        let via_kernel = tau * tau / (1.0 - rho * rho) * poisson_kernel(rho, omega).unwrap();
        prop_assert!((t.spectral(omega) - via_kernel).abs() <= 1e-12 * via_kernel);
        prop_assert!((t.avar() - t.autocov(0) * (1.0 + rho) / (1.0 - rho)).abs() <= 1e-12 * t.avar());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nnls_unique_under_permutation(
        s in 1usize..8,
        seed in prop::collection::vec(-1.0..1.0_f64, 64 + 8),
        shift in 0usize..8,
    ) {
        let a_mat = DMatrix::from_fn(s, s, |i, j| seed[i * 8 + j]);
        let b = &a_mat * a_mat.transpose() + DMatrix::identity(s, s) * 0.05;
        let b = (&b + b.transpose()) * 0.5;
        let a: Vec<f64> = seed[64..64 + s].to_vec();
        let qp = QuadProgram::new(a.clone(), b.clone(), 1.0).unwrap();
        let sol = solve_nnls(&qp, 1e-12).unwrap();

        let perm: Vec<usize> = (0..s).map(|i| (i + shift) % s).collect();
        let bp = DMatrix::from_fn(s, s, |i, j| b[(perm[i], perm[j])]);
        let ap: Vec<f64> = perm.iter().map(|&i| a[i]).collect();
        let solp = solve_nnls(&QuadProgram::new(ap, bp, 1.0).unwrap(), 1e-12).unwrap();
        for (i, &p) in perm.iter().enumerate() {
            prop_assert!((solp.weights[i] - sol.weights[p]).abs() <= 1e-8);
        }

        prop_assert!(sol.objective <= qp.constant() + 1e-12);
        let g = qp.gradient(&sol.weights);
        for (wi, gi) in sol.weights.iter().zip(&g) {
            prop_assert!(*gi >= -1e-10);
            prop_assert!((wi * gi).abs() <= 1e-10);
        }
    }

    #[test]
    fn fits_are_nonnegative_and_summable(r in peaked(25), delta in 0.02..0.6_f64, c in (-0.5..0.5_f64, -0.4..0.4_f64)) {
        let grid = build_grid(delta, 150).unwrap();
        for weighting in [Weighting::Unweighted, Weighting::Weighted(cosine_weight(512, c))] {
            let fit = project(&r, &grid, &weighting).unwrap();
            let m = &fit.measure;
            prop_assert!(fit.avar() >= 0.0);
            for j in 0..64 {
                prop_assert!(m.spectral_density(PI * j as f64 / 63.0) >= 0.0);
            }
            let l1: f64 = m.support().iter().zip(m.masses()).map(|(a, w)| w * (1.0 + a.abs()) / (1.0 - a.abs())).sum();
            prop_assert!(l1.is_finite());
            prop_assert!((fit.l1_norm() - l1).abs() <= 1e-12 * l1.max(1.0));
            prop_assert!(m.support().iter().all(|a| a.abs() <= 1.0 - delta + 1e-12));
            prop_assert!((fit.avar() - m.spectral_density(0.0)).abs() <= 1e-10 * fit.avar().max(1.0));
        }
    }

    #[test]
    fn obm_is_time_reversible(x in prop::collection::vec(-3.0..3.0_f64, 10..300), frac in 0.05..0.9_f64) {
        let chain = ChainOutput::new(x).unwrap();
        let b = ((chain.len() as f64 * frac) as usize).clamp(1, chain.len() - 1);
        let fwd = obm(&chain, b).unwrap();
        let bwd = obm(&chain.reversed(), b).unwrap();
        prop_assert!((fwd - bwd).abs() <= 1e-10 * fwd.abs().max(1e-12));
    }

    #[test]
    fn initial_sequence_ordering(r in peaked(40)) {
        prop_assume!(r.support_bound() >= 2);
        let pos = initial_seq(&r, InitSeqVariant::Pos).unwrap();
        let dec = initial_seq(&r, InitSeqVariant::Dec).unwrap();
        let conv = initial_seq(&r, InitSeqVariant::Conv).unwrap();
        prop_assert!(dec.avar <= pos.avar);
        prop_assert!(conv.avar <= dec.avar);
        let g = &conv.gammas;
        for i in 0..g.len() {
            prop_assert!(g[i] <= pos.gammas[i]);
            if i + 1 < g.len() {
                prop_assert!(g[i + 1] <= g[i]);
            }
            if i + 2 < g.len() {
                prop_assert!(g[i + 2] - 2.0 * g[i + 1] + g[i] >= -1e-12);
            }
        }
        let raw = paired_sums(&r);
        prop_assert_eq!(pos.gammas.as_slice(), &raw[..pos.gammas.len()]);
    }

    #[test]
    fn windowing_preserves_peak(r in peaked(60), b in 1usize..80, trapezoid in any::<bool>()) {
        let kind = if trapezoid { WindowKind::Trapezoid } else { WindowKind::Bartlett };
        let rw = windowed_autocov(&r, &WindowSpec::new(kind, b).unwrap());
        prop_assert_eq!(rw.lags()[0], r.lags()[0]);
        prop_assert!(rw.lags().iter().all(|v| v.abs() <= rw.lags()[0]));
    }

    #[test]
    fn measure_autocov_matches_density(
        support in prop::collection::vec(-0.95..0.95_f64, 1..5),
        masses in prop::collection::vec(0.01..2.0_f64, 5),
    ) {
        let mut support = support;
        support.sort_by(f64::total_cmp);
        support.dedup();
        let masses = masses[..support.len()].to_vec();
        let m = RepresentingMeasure::new(support, masses).unwrap();
        let r = m.autocov(2000);
        let hat = dtft_on_grid(&r, 4096).unwrap();
        for j in (0..4096).step_by(97) {
            let w = 2.0 * PI * j as f64 / 4096.0;
            prop_assert!((hat.values()[j] - m.spectral_density(w)).abs() <= 1e-9 * m.spectral_density(w).max(1.0));
        }
    }
}
