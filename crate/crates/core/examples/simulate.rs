//! Simulate each supported process on a common grid and print a short summary.

use mfrac::sim::{simulate_process, ProcessConfig, ProcessHurst, ProcessKind};
use mfrac::{GridSpec, HurstSpec, SimSeed};

fn main() -> mfrac::Result<()> {
    let grid = GridSpec::dyadic(12);
    for kind in ProcessKind::ALL {
        let hurst = match kind {
            ProcessKind::Bm | ProcessKind::Bbridge => ProcessHurst::None,
            ProcessKind::Ghbmp => {
                ProcessHurst::Function(HurstSpec::from_fn("0.8 - 0.55t", |t| 0.8 - 0.55 * t))
            }
            _ => ProcessHurst::Constant(0.7),
        };
        let cfg = ProcessConfig {
            kind,
            grid: grid.clone(),
            hurst,
            trunc: 15,
            terminal: 1.0,
            seed: SimSeed(42),
        };
        let sim = simulate_process(&cfg)?;
        let x = sim.series.values();
        println!(
            "{kind:>9}: {} points, X(first) = {:+.4}, X(last) = {:+.4}",
            x.len(),
            x[0],
            x[x.len() - 1]
        );
    }
    Ok(())
}
