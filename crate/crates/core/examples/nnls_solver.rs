//! The active-set solver on a small nonnegative quadratic program.

use momentls::nnls::{solve_nnls, QuadProgram, DEFAULT_TOL};
use nalgebra::DMatrix;

fn main() -> momentls::Result<()> {
    // minimize c - 2 aᵀw + wᵀBw over w ≥ 0
    let b = DMatrix::from_row_slice(3, 3, &[2.0, 0.5, 0.0, 0.5, 1.0, 0.3, 0.0, 0.3, 1.5]);
    let qp = QuadProgram::new(vec![1.0, -0.5, 0.8], b, 2.0)?;
    let sol = solve_nnls(&qp, DEFAULT_TOL)?;

    println!("weights      {:?}", sol.weights);
    println!("objective    {:.12}", sol.objective);
    println!("kkt residual {:.3e}", sol.kkt_residual);
    println!("iterations   {}", sol.iterations);
    println!("support      {:?}", sol.support().collect::<Vec<_>>());
    Ok(())
}
