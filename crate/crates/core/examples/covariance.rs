//! Compare the theoretical covariance of a truncated series with a Monte Carlo estimate.

use mfrac::covariance::{cov_ghbmp, est_cov};
use mfrac::sim::simulate_ghbmp;
use mfrac::{GridSpec, HurstSpec, SimSeed};

fn main() -> mfrac::Result<()> {
    let grid = GridSpec::uniform(0.0, 1.0, 51);
    let spec = HurstSpec::from_fn("0.8 - 0.55t", |t| 0.8 - 0.55 * t);
    let theory = cov_ghbmp(&grid.times()?, &spec, 8, None)?;

    let paths = (0..400)
        .map(|i| simulate_ghbmp(&grid, &spec, 8, SimSeed(3).child(i)))
        .collect::<mfrac::Result<Vec<_>>>()?;
    let empirical = est_cov(&paths, None)?;

    for (i, j) in [(10, 10), (25, 40), (50, 50)] {
        println!(
            "C({i},{j}): theoretical {:.4}, empirical {:.4}",
            theory.get(i, j),
            empirical.get(i, j)
        );
    }
    println!("max |difference| = {:.4}", empirical.max_abs_diff(&theory)?);
    Ok(())
}
