//! Estimation error as a function of the truncation level.

use mfrac::bench::{bench_csv, bench_trunc};
use mfrac::estimation::EstimatorParams;
use mfrac::{HurstSpec, SimSeed};

fn main() -> mfrac::Result<()> {
    let spec = HurstSpec::from_fn("0.4 - 0.25 sin(6 pi t)", |t| {
        0.4 - 0.25 * (6.0 * std::f64::consts::PI * t).sin()
    });
    let rows = bench_trunc(
        &[6, 8, 10, 12],
        5,
        &spec,
        SimSeed(11),
        &EstimatorParams::default(),
    )?;
    print!("{}", bench_csv(&rows, true));
    Ok(())
}
