//! Accuracy and runtime of the truncated series as a function of the truncation level.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::{estimate_hurst, EstimatorParams};
use crate::series::GridSpec;
use crate::sim::{simulate_ghbmp, HurstSpec, SimSeed};

/// Number of evaluation points used to compare an estimate with the true Hurst function.
pub const EVAL_POINTS: usize = 1000;

/// Truncation levels accepted by the benchmark.
pub const LEVEL_RANGE: std::ops::RangeInclusive<u32> = 3..=20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    #[serde(rename = "J")]
    pub j: u32,
    pub max_err: f64,
    pub mean_err: f64,
    pub mse: f64,
    pub mean_elapsed_s: f64,
    /// Subintervals actually used by the estimator at this grid size.
    pub intervals: usize,
}

/// Grid exponent `n = max(J - 4, 3)`; the grid step is `2^-n`.
pub fn grid_exponent(j: u32) -> u32 {
    j.saturating_sub(4).max(3)
}

/// Largest subinterval count (at most `params.n`, at least 2) the sample size supports.
pub fn effective_intervals(points: usize, params: &EstimatorParams) -> usize {
    let per = params.q * params.l;
    ((points - 1) / per).clamp(2, params.n)
}

/// Error summary of one realization: (max, mean absolute, mean squared) over the
/// evaluation points `(m + 1/2) / EVAL_POINTS`.
pub fn estimate_errors(estimate: &[f64], hurst: &HurstSpec, level: u32) -> (f64, f64, f64) {
    let n = estimate.len();
    let (mut max, mut abs, mut sq) = (0.0f64, 0.0, 0.0);
    for m in 0..EVAL_POINTS {
        let u = (m as f64 + 0.5) / EVAL_POINTS as f64;
        let i = ((u * n as f64) as usize).min(n - 1);
        let e = estimate[i] - hurst.eval(level, u);
        max = max.max(e.abs());
        abs += e.abs();
        sq += e * e;
    }
    (max, abs / EVAL_POINTS as f64, sq / EVAL_POINTS as f64)
}

/// Run `reps` simulations per level and average the raw-estimate errors.
///
/// Repetition `r` at level `J` uses seed `seed.child(J * 2^32 + r)`.
pub fn bench_trunc(
    levels: &[u32],
    reps: usize,
    hurst: &HurstSpec,
    seed: SimSeed,
    params: &EstimatorParams,
) -> Result<Vec<BenchRow>> {
    if reps == 0 {
        return Err(Error::domain("at least one repetition is required"));
    }
    if let Some(j) = levels.iter().find(|j| !LEVEL_RANGE.contains(*j)) {
        return Err(Error::domain(format!(
            "truncation level {j} outside {}..={}",
            LEVEL_RANGE.start(),
            LEVEL_RANGE.end()
        )));
    }
    params.validate()?;
    let mut rows = Vec::with_capacity(levels.len());
    for &j in levels {
        let grid = GridSpec::dyadic(grid_exponent(j));
        let points = (1usize << grid_exponent(j)) + 1;
        let est_params = EstimatorParams {
            n: effective_intervals(points, params),
            ..*params
        };
        let (mut max, mut mean, mut mse, mut elapsed) = (0.0, 0.0, 0.0, 0.0);
        for r in 0..reps {
            let s = seed.child(((j as u64) << 32) + r as u64);
            let start = Instant::now();
            let x = simulate_ghbmp(&grid, hurst, j, s)?;
            elapsed += start.elapsed().as_secs_f64();
            let est = estimate_hurst(&x, &est_params)?;
            let (a, b, c) = estimate_errors(&est.raw, hurst, j);
            max += a;
            mean += b;
            mse += c;
        }
        let k = reps as f64;
        rows.push(BenchRow {
            j,
            max_err: max / k,
            mean_err: mean / k,
            mse: mse / k,
            mean_elapsed_s: elapsed / k,
            intervals: est_params.n,
        });
    }
    Ok(rows)
}

/// CSV table; `with_timing = false` drops the timing column for reproducible output.
pub fn bench_csv(rows: &[BenchRow], with_timing: bool) -> String {
    let mut out = String::from("J,max_err,mean_err,mse");
    if with_timing {
        out.push_str(",mean_elapsed_s");
    }
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{},{},{},{}", r.j, r.max_err, r.mean_err, r.mse));
        if with_timing {
            out.push_str(&format!(",{}", r.mean_elapsed_s));
        }
        out.push('\n');
    }
    out
}
