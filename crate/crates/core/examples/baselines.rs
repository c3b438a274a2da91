//! Classical estimators: windowed spectral variance, overlapping batch means
//! and the initial sequence family.

use momentls::baselines::{
    default_bandwidth, initial_seq, obm, politis_bandwidth, windowed_avar, InitSeqVariant, WindowKind, WindowSpec,
};
use momentls::chains::{ar1_truth, simulate_ar1, Ar1Spec};
use momentls::seq::empirical_autocov_full;

fn main() -> momentls::Result<()> {
    let chain = simulate_ar1(&Ar1Spec::new(0.5, 1.0, 10_000, 3))?;
    let r = empirical_autocov_full(&chain);
    let b = default_bandwidth(chain.len());
    println!("true avar {:.4}", ar1_truth(0.5, 1.0)?.avar());

    println!("bartlett (b={b})   {:.4}", windowed_avar(&r, &WindowSpec::new(WindowKind::Bartlett, b)?));
    let bp = politis_bandwidth(&r, chain.len())?;
    println!("trapezoid (b={bp})  {:.4}", windowed_avar(&r, &WindowSpec::new(WindowKind::Trapezoid, bp)?));
    println!("obm (b={b})        {:.4}", obm(&chain, b)?);
    for v in [InitSeqVariant::Pos, InitSeqVariant::Dec, InitSeqVariant::Conv] {
        let e = initial_seq(&r, v)?;
        println!("init {v:?}  {:.4}  ({} pairs)", e.avar, e.gammas.len());
    }
    Ok(())
}
