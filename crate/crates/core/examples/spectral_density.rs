//! Spectral density estimates on a frequency grid against the AR(1) truth.

use momentls::chains::{ar1_truth, simulate_ar1, Ar1Spec};
use momentls::estimator::{estimate, spectral_samples, EstimatorOptions, Method};

fn main() -> momentls::Result<()> {
    let (rho, tau) = (0.6, 1.0);
    let chain = simulate_ar1(&Ar1Spec::new(rho, tau, 10_000, 11))?;
    let truth = ar1_truth(rho, tau)?;
    let opts = EstimatorOptions::default();

    let forms: Vec<_> = [Method::MlsW, Method::Bartlett, Method::Io]
        .iter()
        .map(|&m| estimate(&chain, m, &opts).map(|e| e.spectral.expect("spectral method")))
        .collect::<momentls::Result<_>>()?;

    println!("{:>8} {:>10} {:>10} {:>10} {:>10}", "omega", "truth", "mls-w", "bartlett", "io");
    let samples: Vec<_> = forms.iter().map(|f| spectral_samples(f, 16)).collect();
    for j in 0..samples[0].len() {
        let w = samples[0][j].omega;
        println!(
            "{w:8.4} {:10.4} {:10.4} {:10.4} {:10.4}",
            truth.spectral(w),
            samples[0][j].value,
            samples[1][j].value,
            samples[2][j].value
        );
    }
    Ok(())
}
