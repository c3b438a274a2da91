//! Projecting the autocovariance of a known mixture of geometric sequences
//! onto the moment cone recovers the mixture.

use momentls::mls::{build_grid, project, RepresentingMeasure, Weighting};

fn main() -> momentls::Result<()> {
    let truth = RepresentingMeasure::new(vec![-0.6, 0.3, 0.8], vec![0.5, 1.0, 0.25])?;
    let r = truth.autocov(400);

    let grid = build_grid(0.1, 401)?.with_point(-0.6)?.with_point(0.3)?.with_point(0.8)?;
    let fit = project(&r, &grid, &Weighting::Unweighted)?;

    println!("true avar   {:.10}", truth.asymptotic_variance());
    println!("fitted avar {:.10}", fit.avar());
    println!("objective   {:.3e}", fit.objective);
    for (a, w) in fit.measure.support().iter().zip(fit.measure.masses()) {
        println!("  alpha {a:+.4}  mass {w:.6}");
    }
    Ok(())
}
