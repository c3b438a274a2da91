//! Data-driven choice of the grid margin δ from batches of the chain.

use momentls::chains::{simulate_ar1, Ar1Spec};
use momentls::mls::{tune_delta, DEFAULT_BATCHES};

fn main() -> momentls::Result<()> {
    for rho in [-0.9, -0.5, 0.0, 0.5, 0.9, 0.99] {
        let chain = simulate_ar1(&Ar1Spec::new(rho, 1.0, 10_000, 5))?;
        let delta = tune_delta(&chain, DEFAULT_BATCHES)?;
        println!("rho {rho:+.2}  delta {delta:.4}  (1 - |rho| = {:.2})", 1.0 - rho.abs());
    }
    Ok(())
}
