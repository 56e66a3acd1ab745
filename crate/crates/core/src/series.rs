//! Time-series container and time grids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A realization sampled on a strictly increasing time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSeries")]
pub struct TimeSeries {
    #[serde(rename = "t")]
    times: Vec<f64>,
    #[serde(rename = "x")]
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct RawSeries {
    #[serde(alias = "times")]
    t: Vec<f64>,
    #[serde(alias = "values")]
    x: Vec<f64>,
}

impl TryFrom<RawSeries> for TimeSeries {
    type Error = Error;

    fn try_from(raw: RawSeries) -> Result<Self> {
        TimeSeries::new(raw.t, raw.x)
    }
}

impl TimeSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::Data(format!(
                "times has {} entries but values has {}",
                times.len(),
                values.len()
            )));
        }
        if times.len() < 2 {
            return Err(Error::InsufficientData {
                needed: 2,
                got: times.len(),
            });
        }
        if let Some(i) = times.iter().chain(&values).position(|v| !v.is_finite()) {
            return Err(Error::Data(format!("non-finite entry at position {i}")));
        }
        if let Some(i) = times.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::Data(format!(
                "times must be strictly increasing (violated at index {})",
                i + 1
            )));
        }
        Ok(TimeSeries { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn start(&self) -> f64 {
        self.times[0]
    }

    pub fn end(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.times, self.values)
    }

    /// Linear interpolation at `t`; values outside the range are clamped to the end samples.
    pub fn interpolate(&self, t: f64) -> f64 {
        let ts = &self.times;
        if t <= ts[0] {
            return self.values[0];
        }
        let last = ts.len() - 1;
        if t >= ts[last] {
            return self.values[last];
        }
        // first index with times[i] > t
        let hi = ts.partition_point(|&s| s <= t);
        let lo = hi - 1;
        if ts[lo] == t {
            return self.values[lo];
        }
        let w = (t - ts[lo]) / (ts[hi] - ts[lo]);
        self.values[lo] + w * (self.values[hi] - self.values[lo])
    }

    /// Interpolate onto a sorted sequence of query times in a single sweep.
    pub fn interpolate_sorted(&self, queries: &[f64]) -> Vec<f64> {
        let ts = &self.times;
        let vs = &self.values;
        let last = ts.len() - 1;
        let mut hi = 1usize;
        queries
            .iter()
            .map(|&t| {
                if t <= ts[0] {
                    return vs[0];
                }
                if t >= ts[last] {
                    return vs[last];
                }
                while ts[hi] <= t {
                    hi += 1;
                }
                let lo = hi - 1;
                if ts[lo] == t {
                    return vs[lo];
                }
                let w = (t - ts[lo]) / (ts[hi] - ts[lo]);
                vs[lo] + w * (vs[hi] - vs[lo])
            })
            .collect()
    }

    /// True when consecutive steps agree to within a relative tolerance.
    pub fn is_uniform(&self) -> bool {
        is_uniform(&self.times)
    }
}

pub(crate) fn is_uniform(times: &[f64]) -> bool {
    if times.len() < 3 {
        return true;
    }
    let span = times[times.len() - 1] - times[0];
    let step = span / (times.len() - 1) as f64;
    times
        .iter()
        .enumerate()
        .all(|(i, &t)| (t - (times[0] + i as f64 * step)).abs() <= 1e-9 * span.max(1.0))
}

/// Time grid description for the simulators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Uniform { start: f64, end: f64, points: usize },
    Explicit(Vec<f64>),
}

impl GridSpec {
    pub fn uniform(start: f64, end: f64, points: usize) -> Self {
        GridSpec::Uniform { start, end, points }
    }

    /// `2^level + 1` equally spaced points on [0, 1].
    pub fn dyadic(level: u32) -> Self {
        GridSpec::uniform(0.0, 1.0, (1usize << level) + 1)
    }

    /// Materialize the grid, checking that it is strictly increasing.
    pub fn times(&self) -> Result<Vec<f64>> {
        match self {
            GridSpec::Uniform { start, end, points } => {
                if !(start.is_finite() && end.is_finite()) || end <= start {
                    return Err(Error::domain(format!(
                        "grid end ({end}) must exceed start ({start})"
                    )));
                }
                if *points < 2 {
                    return Err(Error::domain("a grid needs at least 2 points"));
                }
                let n = points - 1;
                let step = (end - start) / n as f64;
                let mut ts: Vec<f64> = (0..=n).map(|i| start + i as f64 * step).collect();
                ts[n] = *end;
                Ok(ts)
            }
            GridSpec::Explicit(ts) => {
                if ts.len() < 2 {
                    return Err(Error::domain("a grid needs at least 2 points"));
                }
                if ts.iter().any(|t| !t.is_finite()) {
                    return Err(Error::domain("grid contains a non-finite time"));
                }
                if ts.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::domain("grid must be strictly increasing"));
                }
                Ok(ts.clone())
            }
        }
    }
}
