//! Gaussian Haar-based multifractional process via its truncated wavelet series.

use rayon::prelude::*;

use super::hurst::HurstSpec;
use super::innovations::{InnovationSource, SeededInnovations, SimSeed};
use super::kernel::{
    far_shape, near_shape, series_coefficients, series_shape, FAR_FIELD, SERIES_TERMS,
};
use crate::error::{Error, Result};
use crate::series::{GridSpec, TimeSeries};

/// Default truncation level of the outer series.
pub const DEFAULT_TRUNCATION: u32 = 15;
/// Largest accepted truncation level (2^27 terms).
pub const MAX_TRUNCATION: u32 = 26;

/// Per-term constants of one level: exponent, weight and far-field series coefficients.
struct Term {
    a: f64,
    weight: f64,
    coeffs: [f64; SERIES_TERMS],
}

struct Level {
    scale: f64,
    terms: Vec<Term>,
    /// `ln(n - 1/2)` and `1 / (4 (n - 1/2)^2)` for integer offsets `n`, used when `2^j t` is integral.
    half_ln: Vec<f64>,
    half_w: Vec<f64>,
}

/// Precomputed wavelet-series terms `ε_{j,k} 2^{-j H_{j,k}}` for levels `0..=trunc`.
pub struct GhbmpTerms {
    levels: Vec<Level>,
    clamped: usize,
}

impl GhbmpTerms {
    pub fn new(hurst: &HurstSpec, trunc: u32, source: &dyn InnovationSource) -> Result<Self> {
        if trunc > MAX_TRUNCATION {
            return Err(Error::Resource(format!(
                "truncation level {trunc} exceeds {MAX_TRUNCATION} (2^{} series terms)",
                trunc + 1
            )));
        }
        let mut clamped = 0;
        let levels = (0..=trunc)
            .map(|j| {
                let (hs, c) = hurst.level_values(j);
                clamped += c;
                let eps = source.level(j);
                let scale = (j as f64).exp2();
                let terms = hs
                    .iter()
                    .zip(&eps)
                    .map(|(&h, &e)| {
                        let a = h + 0.5;
                        Term {
                            a,
                            weight: e * scale.powf(-h),
                            coeffs: series_coefficients(a),
                        }
                    })
                    .collect();
                let size = (1usize << j) + 1;
                let half_ln = (0..size).map(|n| (n as f64 - 0.5).ln()).collect();
                let half_w = (0..size)
                    .map(|n| 0.25 / ((n as f64 - 0.5) * (n as f64 - 0.5)))
                    .collect();
                Level {
                    scale,
                    terms,
                    half_ln,
                    half_w,
                }
            })
            .collect();
        if clamped > 0 {
            log::warn!("{clamped} Hurst values clamped into (0, 1)");
        }
        Ok(GhbmpTerms { levels, clamped })
    }

    /// Number of `H_{j,k}` values that had to be clamped.
    pub fn clamped(&self) -> usize {
        self.clamped
    }

    /// The truncated series at a single time point.
    pub fn eval(&self, t: f64) -> f64 {
        let mut total = 0.0;
        for level in &self.levels {
            let s = level.scale * t;
            if s <= 0.0 {
                continue;
            }
            // translates with k < s contribute; those with s - k >= FAR_FIELD use the series
            let active = (s.ceil() as usize).min(level.terms.len());
            let far = if s >= FAR_FIELD {
                ((s - FAR_FIELD).floor() as usize + 1).min(active)
            } else {
                0
            };
            let mut acc = 0.0;
            if s.fract() == 0.0 {
                let top = s as usize;
                for (k, term) in level.terms[..far].iter().enumerate() {
                    let n = top - k;
                    let ya = (term.a * level.half_ln[n]).exp();
                    acc += term.weight * series_shape(ya, level.half_w[n], &term.coeffs);
                }
            } else {
                for (k, term) in level.terms[..far].iter().enumerate() {
                    let y = s - k as f64 - 0.5;
                    acc += term.weight * far_shape(y, term.a, &term.coeffs);
                }
            }
            for (k, term) in level.terms[far..active].iter().enumerate() {
                let x = s - (far + k) as f64;
                if x > 0.0 {
                    acc += term.weight * near_shape(x, term.a);
                }
            }
            total += acc;
        }
        total
    }
}

/// Simulate the process on `grid` (all points in [0, 1]) with truncation level `trunc`.
pub fn simulate_ghbmp(
    grid: &GridSpec,
    hurst: &HurstSpec,
    trunc: u32,
    seed: SimSeed,
) -> Result<TimeSeries> {
    simulate_ghbmp_with(grid, hurst, trunc, &SeededInnovations(seed))
}

/// As [`simulate_ghbmp`] with an explicit coefficient source.
pub fn simulate_ghbmp_with(
    grid: &GridSpec,
    hurst: &HurstSpec,
    trunc: u32,
    source: &dyn InnovationSource,
) -> Result<TimeSeries> {
    let times = grid.times()?;
    if let Some(t) = times.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(Error::domain(format!("grid point {t} outside [0, 1]")));
    }
    let terms = GhbmpTerms::new(hurst, trunc, source)?;
    let values = times.par_iter().map(|&t| terms.eval(t)).collect();
    TimeSeries::new(times, values)
}
