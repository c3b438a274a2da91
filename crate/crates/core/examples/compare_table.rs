//! A small replicated experiment producing the per-method MSE/ISE table.

use momentls::harness::{run_experiment, ExperimentConfig};

fn main() -> momentls::Result<()> {
    let config = ExperimentConfig::new(0.9, 1.0, 2_000, 1).with_replications(20);
    let result = run_experiment(&config)?;
    println!("true avar {:.4}", result.true_avar);
    print!("{}", result.to_csv());
    Ok(())
}
