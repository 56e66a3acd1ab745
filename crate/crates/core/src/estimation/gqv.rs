//! Generalized quadratic variation estimator of a time-varying Hurst function.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{is_uniform, TimeSeries};

/// Which quantity an estimate holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    /// Hurst function, values in [0, 1].
    Hurst,
    /// Local fractal dimension `2 - H`, values in [1, 2].
    Lfd,
}

impl Quantity {
    pub fn range(self) -> (f64, f64) {
        match self {
            Quantity::Hurst => (0.0, 1.0),
            Quantity::Lfd => (1.0, 2.0),
        }
    }
}

/// How the fine resampling grid is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridPolicy {
    /// Fine grid step equals the sampling step, so uniform input with a step count
    /// divisible by `Q` is used without interpolation.
    #[default]
    Native,
    /// Fine grid size is the largest multiple of `Q * N` not exceeding the step count,
    /// giving every subinterval the same number of increments.
    Aligned,
}

/// Parameters of the estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EstimatorParams {
    /// Number of subintervals.
    pub n: usize,
    /// Ratio between the two resolutions compared.
    pub q: usize,
    /// Order of the increments.
    pub l: usize,
    pub grid: GridPolicy,
}

impl Default for EstimatorParams {
    fn default() -> Self {
        EstimatorParams {
            n: 100,
            q: 2,
            l: 2,
            grid: GridPolicy::Native,
        }
    }
}

impl EstimatorParams {
    pub fn with_intervals(n: usize) -> Self {
        EstimatorParams {
            n,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::domain(format!(
                "N must be at least 2, got {}",
                self.n
            )));
        }
        if self.q < 2 {
            return Err(Error::domain(format!(
                "Q must be at least 2, got {}",
                self.q
            )));
        }
        if self.l < 2 {
            return Err(Error::domain(format!(
                "L must be at least 2, got {}",
                self.l
            )));
        }
        Ok(())
    }

    /// Minimum number of sample points accepted by the estimator.
    pub fn min_points(&self) -> usize {
        self.q * self.n * self.l + 1
    }
}

/// Per-subinterval estimates of the Hurst function (or of the local fractal dimension).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HurstEstimate {
    pub quantity: Quantity,
    /// Left endpoints of the subintervals on the original time scale.
    pub interval_starts: Vec<f64>,
    pub raw: Vec<f64>,
    pub smoothed: Option<Vec<f64>>,
    /// Subintervals where one of the variations vanished.
    pub degenerate: Vec<bool>,
    /// Subintervals without own increments on some grid, borrowed from a neighbor.
    pub merged: Vec<usize>,
    pub params: EstimatorParams,
}

impl HurstEstimate {
    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    pub fn any_degenerate(&self) -> bool {
        self.degenerate.iter().any(|d| *d)
    }

    /// Smoothed values when available, raw values otherwise.
    pub fn best(&self) -> &[f64] {
        self.smoothed.as_deref().unwrap_or(&self.raw)
    }

    /// Convert a Hurst estimate into local fractal dimensions `2 - H`.
    pub fn to_lfd(&self) -> HurstEstimate {
        if self.quantity == Quantity::Lfd {
            return self.clone();
        }
        HurstEstimate {
            quantity: Quantity::Lfd,
            raw: self.raw.iter().map(|h| 2.0 - h).collect(),
            smoothed: self
                .smoothed
                .as_ref()
                .map(|s| s.iter().map(|h| 2.0 - h).collect()),
            ..self.clone()
        }
    }
}

/// Increment coefficients `a_l = (-1)^{L-l} binom(L, l)`, `l = 0..=L`.
pub fn gqv_coefficients(order: usize) -> Result<Vec<f64>> {
    if order < 2 {
        return Err(Error::domain(format!("L must be at least 2, got {order}")));
    }
    let mut out = Vec::with_capacity(order + 1);
    let mut binom = 1.0f64;
    for l in 0..=order {
        if l > 0 {
            binom = binom * (order - l + 1) as f64 / l as f64;
        }
        let sign = if (order - l).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        out.push(sign * binom.round());
    }
    Ok(out)
}

/// Mean squared increments per subinterval on the grid `k / m`, `k = 0..=m`.
///
/// Returns the variations and the indices of subintervals that had to borrow increments.
fn variations(samples: &[f64], coeffs: &[f64], n: usize, tiny: f64) -> (Vec<f64>, Vec<usize>) {
    let m = samples.len() - 1;
    let order = coeffs.len() - 1;
    let mut sums = vec![0.0; n];
    let mut counts = vec![0usize; n];
    for k in 0..=(m - order) {
        let d: f64 = coeffs
            .iter()
            .zip(&samples[k..=k + order])
            .map(|(a, x)| a * x)
            .sum();
        // k/m lies in [i/n, (i+1)/n) exactly when i = floor(k n / m)
        let i = k * n / m;
        sums[i] += d * d;
        counts[i] += 1;
    }
    let mut merged = Vec::new();
    let mut v: Vec<Option<f64>> = sums
        .iter()
        .zip(&counts)
        .map(|(s, &c)| (c > 0).then(|| s / c as f64))
        .collect();
    for i in 0..n {
        if counts[i] == 0 {
            merged.push(i);
            let right = (i + 1..n).find(|&r| counts[r] > 0);
            let left = (0..i).rev().find(|&l| counts[l] > 0);
            v[i] = right.or(left).map(|j| sums[j] / counts[j] as f64);
        }
    }
    let v = v
        .into_iter()
        .map(|x| {
            let x = x.unwrap_or(0.0);
            if x <= tiny {
                0.0
            } else {
                x
            }
        })
        .collect();
    (v, merged)
}

fn resample(x: &TimeSeries, m: usize) -> Vec<f64> {
    let t0 = x.start();
    let span = x.end() - t0;
    if x.len() == m + 1 && is_uniform(x.times()) {
        return x.values().to_vec();
    }
    let queries: Vec<f64> = (0..=m).map(|k| t0 + span * k as f64 / m as f64).collect();
    x.interpolate_sorted(&queries)
}

/// Estimate the Hurst function on `params.n` subintervals of the series' time range.
pub fn estimate_hurst(x: &TimeSeries, params: &EstimatorParams) -> Result<HurstEstimate> {
    params.validate()?;
    let needed = params.min_points();
    if x.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            got: x.len(),
        });
    }
    let (n, q) = (params.n, params.q);
    let steps = x.len() - 1;
    let fine = match params.grid {
        GridPolicy::Native => steps - steps % q,
        GridPolicy::Aligned => steps - steps % (q * n),
    };
    let coarse = fine / q;
    let coeffs = gqv_coefficients(params.l)?;

    let fine_samples = resample(x, fine);
    let coarse_samples: Vec<f64> = fine_samples.iter().step_by(q).copied().collect();

    // squared increments below this level are rounding noise
    let scale = x
        .values()
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let abs_sum: f64 = coeffs.iter().map(|a| a.abs()).sum();
    let tiny = (64.0 * f64::EPSILON * scale * abs_sum).powi(2);

    let (v_coarse, mut merged) = variations(&coarse_samples, &coeffs, n, tiny);
    let (v_fine, merged_fine) = variations(&fine_samples, &coeffs, n, tiny);
    merged.extend(merged_fine);
    merged.sort_unstable();
    merged.dedup();
    if !merged.is_empty() {
        log::warn!("subintervals {merged:?} had no increments and borrowed from a neighbor");
    }
    debug_assert_eq!(coarse, coarse_samples.len() - 1);

    let log_base = ((q * q) as f64).ln();
    let mut degenerate = vec![false; n];
    let raw = v_coarse
        .iter()
        .zip(&v_fine)
        .enumerate()
        .map(|(i, (&vc, &vf))| {
            if vc == 0.0 || vf == 0.0 {
                degenerate[i] = true;
                if vf == 0.0 {
                    return 1.0;
                }
                return 0.0;
            }
            ((vc / vf).ln() / log_base).clamp(0.0, 1.0)
        })
        .collect();

    let t0 = x.start();
    let span = x.end() - t0;
    Ok(HurstEstimate {
        quantity: Quantity::Hurst,
        interval_starts: (0..n).map(|i| t0 + span * i as f64 / n as f64).collect(),
        raw,
        smoothed: None,
        degenerate,
        merged,
        params: *params,
    })
}

/// Local fractal dimension estimates `2 - H`.
pub fn estimate_lfd(x: &TimeSeries, params: &EstimatorParams) -> Result<HurstEstimate> {
    Ok(estimate_hurst(x, params)?.to_lfd())
}
