//! The two-stage fit: an unweighted projection supplies a spectral weight for
//! a second, weighted projection on the same grid.

use momentls::chains::{ar1_truth, simulate_ar1, Ar1Spec};
use momentls::mls::{fit_pair, DeltaChoice};

fn main() -> momentls::Result<()> {
    let (rho, tau) = (-0.8, 1.0);
    let truth = ar1_truth(rho, tau)?;
    println!("true avar {:.4}", truth.avar());

    for seed in 0..5 {
        let chain = simulate_ar1(&Ar1Spec::new(rho, tau, 5_000, seed))?;
        let pair = fit_pair(&chain, DeltaChoice::Auto, 500)?;
        println!(
            "seed {seed}: delta {:.3}  unweighted {:8.4} ({} atoms)  weighted {:8.4} ({} atoms)",
            pair.unweighted.delta,
            pair.unweighted.avar(),
            pair.unweighted.measure.len(),
            pair.weighted.avar(),
            pair.weighted.measure.len(),
        );
    }
    Ok(())
}
