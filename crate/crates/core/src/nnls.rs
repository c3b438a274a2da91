//! Nonnegative least squares in quadratic-program form.
//!
//! Minimizes `c - 2aᵀw + wᵀBw` over `w ≥ 0` with a Lawson–Hanson active-set
//! iteration. The passive-set equality systems are solved by a dense
//! Cholesky factorization, recomputed at each step (passive sets stay small
//! because the fitted measures are sparse).

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Default relative KKT tolerance.
pub const DEFAULT_TOL: f64 = 1e-14;

const SYMMETRY_TOL: f64 = 1e-12;
const MAX_CONDITION: f64 = 1e14;
const ZERO_WEIGHT_RATIO: f64 = 1e-12;

/// `min c - 2aᵀw + wᵀBw  s.t. w ≥ 0`.
#[derive(Debug, Clone)]
pub struct QuadProgram {
    a: Vec<f64>,
    b: DMatrix<f64>,
    constant: f64,
}

impl QuadProgram {
    pub fn new(a: Vec<f64>, b: DMatrix<f64>, constant: f64) -> Result<Self> {
        let s = a.len();
        if s == 0 {
            return Err(Error::InvalidProgram("empty program".into()));
        }
        if b.nrows() != s || b.ncols() != s {
            return Err(Error::InvalidProgram(format!(
                "B is {}x{}, expected {s}x{s}",
                b.nrows(),
                b.ncols()
            )));
        }
        if a.iter().chain(b.iter()).any(|v| !v.is_finite()) || !constant.is_finite() {
            return Err(Error::InvalidProgram("non-finite coefficient".into()));
        }
        for i in 0..s {
            if b[(i, i)] <= 0.0 {
                return Err(Error::InvalidProgram(format!("B[{i},{i}] = {} is not positive", b[(i, i)])));
            }
            for j in 0..i {
                let diff = (b[(i, j)] - b[(j, i)]).abs();
                if diff > SYMMETRY_TOL {
                    return Err(Error::InvalidProgram(format!(
                        "B not symmetric at ({i},{j}): |B_ij - B_ji| = {diff:e}"
                    )));
                }
            }
        }
        Ok(Self { a, b, constant })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn objective(&self, w: &[f64]) -> f64 {
        let bw = self.b_times(w);
        let quad: f64 = w.iter().zip(&bw).map(|(x, y)| x * y).sum();
        let lin: f64 = w.iter().zip(&self.a).map(|(x, y)| x * y).sum();
        self.constant - 2.0 * lin + quad
    }

    /// Gradient half `Bw - a`.
    pub fn gradient(&self, w: &[f64]) -> Vec<f64> {
        let mut g = self.b_times(w);
        for (gi, ai) in g.iter_mut().zip(&self.a) {
            *gi -= ai;
        }
        g
    }

    /// Largest KKT violation, measured relative to `max(1, ‖a‖∞)`:
    /// dual infeasibility `-(Bw-a)_i` and complementarity `|w_i (Bw-a)_i| / max(1, |a_i|)`.
    pub fn kkt_residual(&self, w: &[f64]) -> f64 {
        let scale = self.scale();
        let g = self.gradient(w);
        g.iter()
            .zip(w)
            .zip(&self.a)
            .map(|((&gi, &wi), &ai)| (-gi).max((wi * gi).abs() / ai.abs().max(1.0)))
            .fold(0.0, f64::max)
            / scale
    }

    fn scale(&self) -> f64 {
        self.a.iter().fold(1.0_f64, |m, v| m.max(v.abs()))
    }

    fn b_times(&self, w: &[f64]) -> Vec<f64> {
        let s = self.a.len();
        let mut out = vec![0.0; s];
        for (j, &wj) in w.iter().enumerate() {
            if wj != 0.0 {
                let col = self.b.column(j);
                for (o, bij) in out.iter_mut().zip(col.iter()) {
                    *o += bij * wj;
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QpSolution {
    pub weights: Vec<f64>,
    pub objective: f64,
    pub kkt_residual: f64,
    pub iterations: usize,
    /// A near-singular passive system forced an index to be dropped.
    pub degenerate: bool,
}

impl QpSolution {
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.weights.iter().enumerate().filter(|(_, &w)| w > 0.0).map(|(i, _)| i)
    }
}

/// Lower-triangular Cholesky factor of a small dense SPD matrix stored
/// row-major, or `None` when a pivot is not positive or the condition
/// estimate `(max Lᵢᵢ / min Lᵢᵢ)²` exceeds [`MAX_CONDITION`].
fn cholesky(m: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = m[i * n + j];
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if sum <= 0.0 || !sum.is_finite() {
                    return None;
                }
                l[i * n + i] = sum.sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    let (lo, hi) = (0..n)
        .map(|i| l[i * n + i])
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), d| (lo.min(d), hi.max(d)));
    if (hi / lo).powi(2) > MAX_CONDITION {
        return None;
    }
    Some(l)
}

fn cholesky_solve(l: &[f64], n: usize, rhs: &mut [f64]) {
    for i in 0..n {
        let mut sum = rhs[i];
        for k in 0..i {
            sum -= l[i * n + k] * rhs[k];
        }
        rhs[i] = sum / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut sum = rhs[i];
        for k in i + 1..n {
            sum -= l[k * n + i] * rhs[k];
        }
        rhs[i] = sum / l[i * n + i];
    }
}

/// Solves the passive-set system `B_PP z = a_P`.
fn solve_passive(qp: &QuadProgram, passive: &[usize]) -> Option<Vec<f64>> {
    let n = passive.len();
    let mut m = vec![0.0; n * n];
    for (r, &i) in passive.iter().enumerate() {
        for (c, &j) in passive.iter().enumerate() {
            m[r * n + c] = qp.b[(i, j)];
        }
    }
    let l = cholesky(&m, n)?;
    let mut z: Vec<f64> = passive.iter().map(|&i| qp.a[i]).collect();
    cholesky_solve(&l, n, &mut z);
    z.iter().all(|v| v.is_finite()).then_some(z)
}

/// Lawson–Hanson active-set solve.
///
/// Converged when every inactive coordinate has `(a - Bw)_i ≤ tol·max(1, ‖a‖∞)`.
/// Returns [`Error::IterationLimit`] carrying the best iterate after `10·s`
/// steps.
pub fn solve_nnls(qp: &QuadProgram, tol: f64) -> Result<QpSolution> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    let s = qp.len();
    let threshold = tol * qp.scale();
    let limit = 10 * s;

    let mut w = vec![0.0; s];
    let mut passive: Vec<usize> = Vec::new();
    let mut in_passive = vec![false; s];
    // `banned` marks indices dropped for near-singularity; `skipped` marks
    // indices whose trial entry came out nonpositive. Both are cleared once
    // the iterate moves.
    let mut banned = vec![false; s];
    let mut skipped = vec![false; s];
    let mut degenerate = false;
    let mut iterations = 0;

    'outer: loop {
        let g = qp.gradient(&w);
        let candidate = (0..s)
            .filter(|&i| !in_passive[i] && !banned[i] && !skipped[i])
            .map(|i| (i, -g[i]))
            .filter(|&(_, d)| d > threshold)
            .max_by(|x, y| x.1.total_cmp(&y.1));
        let Some((entering, _)) = candidate else { break };

        passive.push(entering);
        in_passive[entering] = true;
        let mut first = true;

        loop {
            iterations += 1;
            if iterations > limit {
                let best = finish(qp, w, iterations, degenerate);
                return Err(Error::IterationLimit { limit, best: Box::new(best) });
            }

            let Some(z) = solve_passive(qp, &passive) else {
                let dropped = passive.pop().expect("passive set is nonempty here");
                in_passive[dropped] = false;
                w[dropped] = 0.0;
                banned[dropped] = true;
                degenerate = true;
                continue 'outer;
            };

            if z.iter().all(|&v| v > 0.0) {
                for (&i, &v) in passive.iter().zip(&z) {
                    w[i] = v;
                }
                skipped.iter_mut().for_each(|b| *b = false);
                banned.iter_mut().for_each(|b| *b = false);
                continue 'outer;
            }

            if first && z.last().is_some_and(|&v| v <= 0.0) {
                // Entering coordinate would leave at step length zero.
                let dropped = passive.pop().expect("passive set is nonempty here");
                in_passive[dropped] = false;
                skipped[dropped] = true;
                continue 'outer;
            }
            first = false;

            // Step toward z until the first passive coordinate hits zero.
            let mut step = 1.0_f64;
            let mut blocking = None;
            for (p, (&i, &zi)) in passive.iter().zip(&z).enumerate() {
                if zi <= 0.0 {
                    let t = w[i] / (w[i] - zi);
                    if t < step {
                        step = t;
                        blocking = Some(p);
                    }
                }
            }
            for (&i, &zi) in passive.iter().zip(&z) {
                w[i] += step * (zi - w[i]);
            }
            if let Some(p) = blocking {
                w[passive[p]] = 0.0;
            }
            let mut p = 0;
            while p < passive.len() {
                let i = passive[p];
                if w[i] <= 0.0 {
                    w[i] = 0.0;
                    in_passive[i] = false;
                    passive.remove(p);
                } else {
                    p += 1;
                }
            }
            if passive.is_empty() {
                continue 'outer;
            }
        }
    }

    Ok(finish(qp, w, iterations, degenerate))
}

fn finish(qp: &QuadProgram, mut w: Vec<f64>, iterations: usize, degenerate: bool) -> QpSolution {
    let max = w.iter().fold(0.0_f64, |m, &v| m.max(v));
    for v in w.iter_mut() {
        if *v < ZERO_WEIGHT_RATIO * max || *v < 0.0 {
            *v = 0.0;
        }
    }
    QpSolution {
        objective: qp.objective(&w),
        kkt_residual: qp.kkt_residual(&w),
        weights: w,
        iterations,
        degenerate,
    }
}
