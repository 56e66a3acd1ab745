//! Level-set and path statistics of a single realization.
//!
//! Grid-based statistics first resample the series by linear interpolation onto
//! `T1 + k δ`, `k = 0..=N`, with `δ = (T2 - T1) / N`.

mod rsi;

use serde::{Deserialize, Serialize};

pub use rsi::rs_index;

use crate::error::{Error, Result};
use crate::series::TimeSeries;

pub const DEFAULT_RESAMPLE: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Greater,
    Lower,
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greater" => Ok(Direction::Greater),
            "lower" => Ok(Direction::Lower),
            _ => Err(Error::domain(format!(
                "direction must be `greater` or `lower`, got `{s}`"
            ))),
        }
    }
}

/// Level `a`, side of the level, resampling size and optional sub-interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelQuery {
    pub level: f64,
    #[serde(default)]
    pub direction: Direction,
    #[serde(default = "default_resample")]
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sub_interval: Option<(f64, f64)>,
}

fn default_resample() -> usize {
    DEFAULT_RESAMPLE
}

impl LevelQuery {
    pub fn new(level: f64, direction: Direction) -> Self {
        LevelQuery {
            level,
            direction,
            n: DEFAULT_RESAMPLE,
            sub_interval: None,
        }
    }

    pub fn with_resample(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_sub_interval(mut self, lo: f64, hi: f64) -> Self {
        self.sub_interval = Some((lo, hi));
        self
    }

    fn holds(&self, x: f64) -> bool {
        match self.direction {
            Direction::Greater => x >= self.level,
            Direction::Lower => x <= self.level,
        }
    }

    fn excess(&self, x: f64) -> f64 {
        match self.direction {
            Direction::Greater => (x - self.level).max(0.0),
            Direction::Lower => (self.level - x).max(0.0),
        }
    }
}

/// Series values on the uniform `δ`-grid of a query, with `δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Resampled {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub delta: f64,
}

/// Interpolate onto `T1 + k δ`, `k = 0..=N`; the last point is exactly `T2`.
pub fn resample(x: &TimeSeries, q: &LevelQuery) -> Result<Resampled> {
    if q.n == 0 {
        return Err(Error::domain("resampling size N must be at least 1"));
    }
    if !q.level.is_finite() {
        return Err(Error::domain(format!("level {} is not finite", q.level)));
    }
    let (lo, hi) = q.sub_interval.unwrap_or((x.start(), x.end()));
    if !(lo < hi) || lo < x.start() || hi > x.end() {
        return Err(Error::domain(format!(
            "sub-interval [{lo}, {hi}] must be increasing and inside [{}, {}]",
            x.start(),
            x.end()
        )));
    }
    let delta = (hi - lo) / q.n as f64;
    let mut times: Vec<f64> = (0..=q.n).map(|k| lo + k as f64 * delta).collect();
    times[q.n] = hi;
    let values = x.interpolate_sorted(&times);
    Ok(Resampled {
        times,
        values,
        delta,
    })
}

/// Time spent above (or below) the level: `δ` times the number of grid points satisfying it.
pub fn sojourn(x: &TimeSeries, q: &LevelQuery) -> Result<f64> {
    let r = resample(x, q)?;
    Ok(r.delta * r.values.iter().filter(|v| q.holds(**v)).count() as f64)
}

/// Excursion area: `δ` times the summed exceedance over (or shortfall below) the level.
pub fn exc_area(x: &TimeSeries, q: &LevelQuery) -> Result<f64> {
    let r = resample(x, q)?;
    Ok(r.delta * r.values.iter().map(|v| q.excess(*v)).sum::<f64>())
}

/// Number of crossings of level `a` between consecutive samples.
///
/// A sample equal to `a` keeps the side of the previous sample; a series starting at `a`
/// starts below it.
pub fn cross_count(x: &TimeSeries, a: f64) -> usize {
    let mut above = false;
    let mut count = 0;
    for (i, &v) in x.values().iter().enumerate() {
        if v == a {
            continue;
        }
        let side = v > a;
        if i > 0 && side != above {
            count += 1;
        }
        above = side;
    }
    count
}

/// Crossings per unit time.
pub fn cross_rate(x: &TimeSeries, a: f64) -> f64 {
    cross_count(x, a) as f64 / (x.end() - x.start())
}

/// Crossings of the sample mean.
pub fn cross_mean(x: &TimeSeries) -> usize {
    let mean = x.values().iter().sum::<f64>() / x.len() as f64;
    cross_count(x, mean)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Streaks {
    pub longest: f64,
    pub mean: f64,
    pub count: usize,
}

/// Longest and mean duration of maximal runs of grid points satisfying the level condition.
/// A run of `m` points lasts `m δ`.
pub fn streak_stats(x: &TimeSeries, q: &LevelQuery) -> Result<Streaks> {
    let r = resample(x, q)?;
    let mut runs = Vec::new();
    let mut current = 0usize;
    for v in &r.values {
        if q.holds(*v) {
            current += 1;
        } else if current > 0 {
            runs.push(current);
            current = 0;
        }
    }
    if current > 0 {
        runs.push(current);
    }
    if runs.is_empty() {
        return Ok(Streaks {
            longest: 0.0,
            mean: 0.0,
            count: 0,
        });
    }
    let longest = *runs.iter().max().unwrap() as f64 * r.delta;
    let mean = runs.iter().sum::<usize>() as f64 / runs.len() as f64 * r.delta;
    Ok(Streaks {
        longest,
        mean,
        count: runs.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extreme {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub value: f64,
    pub time: f64,
}

/// Largest or smallest sampled value and the earliest time it is attained.
pub fn extremum(x: &TimeSeries, kind: Extreme) -> Extremum {
    let mut best = Extremum {
        value: x.values()[0],
        time: x.times()[0],
    };
    for (&t, &v) in x.times().iter().zip(x.values()).skip(1) {
        let better = match kind {
            Extreme::Max => v > best.value,
            Extreme::Min => v < best.value,
        };
        if better {
            best = Extremum { value: v, time: t };
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::GridSpec;

    fn ramp(start: f64, end: f64, n: usize) -> TimeSeries {
        let t = GridSpec::uniform(start, end, n).times().unwrap();
        TimeSeries::new(t.clone(), t).unwrap()
    }

    fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> TimeSeries {
        let t = GridSpec::uniform(0.0, 1.0, n).times().unwrap();
        let v = t.iter().map(|t| f(*t)).collect();
        TimeSeries::new(t, v).unwrap()
    }

    #[test]
    fn ramp_fixtures() {
        let x = ramp(0.0, 1.0, 101);
        let q = LevelQuery::new(0.5, Direction::Greater);
        let delta = 1e-4;
        assert!((sojourn(&x, &q).unwrap() - 0.5).abs() <= delta);
        let area = exc_area(&x, &LevelQuery::new(0.0, Direction::Greater)).unwrap();
        assert!((area - 0.5).abs() <= 2.0 * delta);
        let s = streak_stats(&x, &q).unwrap();
        assert!((s.longest - 0.5).abs() <= delta);
        assert_eq!(s.count, 1);
        assert_eq!(cross_count(&x, 0.5), 1);
        assert_eq!(
            extremum(&x, Extreme::Max),
            Extremum {
                value: 1.0,
                time: 1.0
            }
        );
        assert_eq!(cross_rate(&ramp(0.0, 2.0, 11), 1.0), 0.5);
    }

    #[test]
    fn constant_fixtures() {
        let x = from_fn(50, |_| 0.7);
        let q = LevelQuery::new(0.2, Direction::Greater);
        let soj = sojourn(&x, &q).unwrap();
        assert!((soj - (1.0 + 1e-4)).abs() < 1e-12);
        assert_eq!(
            exc_area(&x, &LevelQuery::new(0.9, Direction::Greater)).unwrap(),
            0.0
        );
        assert_eq!(cross_count(&x, 0.5), 0);
        assert_eq!(cross_rate(&x, 0.5), 0.0);
        assert_eq!(
            extremum(&x, Extreme::Min),
            Extremum {
                value: 0.7,
                time: 0.0
            }
        );
        let none = streak_stats(&x, &LevelQuery::new(0.9, Direction::Greater)).unwrap();
        assert_eq!((none.longest, none.mean, none.count), (0.0, 0.0, 0));
    }

    #[test]
    fn sine_crossings() {
        let x = from_fn(1001, |t| (2.0 * std::f64::consts::PI * t).sin());
        assert_eq!(cross_count(&x, 0.0), 2);
        assert_eq!(cross_rate(&x, 0.0), 2.0);
        assert_eq!(
            cross_mean(&x),
            cross_count(&x, x.values().iter().sum::<f64>() / 1001.0)
        );
    }

    #[test]
    fn hits_carry_the_previous_side() {
        let t: Vec<f64> = (0..6).map(|i| i as f64).collect();
        let x = TimeSeries::new(t.clone(), vec![1.0, 0.0, 0.0, 1.0, 0.0, -1.0]).unwrap();
        assert_eq!(cross_count(&x, 0.0), 1);
        let x = TimeSeries::new(t, vec![0.0, 0.0, 1.0, 0.0, 2.0, 3.0]).unwrap();
        assert_eq!(cross_count(&x, 0.0), 1);
    }

    #[test]
    fn sub_interval_and_validation() {
        let x = ramp(0.0, 1.0, 11);
        let q = LevelQuery::new(0.5, Direction::Lower)
            .with_resample(100)
            .with_sub_interval(0.25, 0.75);
        let soj = sojourn(&x, &q).unwrap();
        assert!((soj - 0.255).abs() < 1e-12, "{soj}");
        let bad = LevelQuery::new(0.5, Direction::Lower).with_sub_interval(0.5, 0.2);
        assert!(sojourn(&x, &bad).is_err());
        let bad = LevelQuery::new(0.5, Direction::Lower).with_sub_interval(-1.0, 0.2);
        assert!(exc_area(&x, &bad).is_err());
        assert!(sojourn(&x, &LevelQuery::new(0.5, Direction::Lower).with_resample(0)).is_err());
        assert!("upper".parse::<Direction>().is_err());
    }
}
