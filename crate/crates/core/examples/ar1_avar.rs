//! Estimate the asymptotic variance of a simulated AR(1) chain with every
//! method and compare against the closed form.

use momentls::chains::{ar1_truth, simulate_ar1, Ar1Spec};
use momentls::estimator::{estimate_all, EstimatorOptions, Method};

fn main() -> momentls::Result<()> {
    let (rho, tau) = (0.7, 1.0);
    let chain = simulate_ar1(&Ar1Spec::new(rho, tau, 20_000, 7))?;
    let truth = ar1_truth(rho, tau)?;

    println!("true avar {:.4}", truth.avar());
    let results = estimate_all(&chain, &Method::ALL, &EstimatorOptions::default());
    for (method, res) in Method::ALL.iter().zip(results) {
        match res {
            Ok(e) => println!("{:>10}  {:9.4}  {:?}", method.id(), e.avar, e.flags),
            Err(err) => println!("{:>10}  failed: {err}", method.id()),
        }
    }
    Ok(())
}
