//! Estimate a time-varying Hurst function from one simulated path.

use mfrac::estimation::{estimate_hurst, smooth_estimate, EstimatorParams, DEFAULT_SPAN};
use mfrac::sim::simulate_ghbmp;
use mfrac::{GridSpec, HurstSpec, SimSeed};

fn main() -> mfrac::Result<()> {
    let truth = |t: f64| 0.4 - 0.25 * (6.0 * std::f64::consts::PI * t).sin();
    let spec = HurstSpec::from_fn("0.4 - 0.25 sin(6 pi t)", truth);
    let x = simulate_ghbmp(&GridSpec::dyadic(14), &spec, 15, SimSeed(7))?;

    let mut est = estimate_hurst(&x, &EstimatorParams::default())?;
    smooth_estimate(&mut est, DEFAULT_SPAN)?;
    let smoothed = est.smoothed.as_deref().unwrap_or_default();

    println!("{:>8} {:>8} {:>8} {:>8}", "t", "true", "raw", "smoothed");
    for i in (0..est.len()).step_by(10) {
        let t = est.interval_starts[i];
        println!(
            "{t:8.3} {:8.4} {:8.4} {:8.4}",
            truth(t),
            est.raw[i],
            smoothed[i]
        );
    }
    Ok(())
}
