use std::fmt;
use std::sync::Arc;

/// Lower/upper margin used when clamping Hurst values into (0, 1).
pub const HURST_EPS: f64 = 1e-6;

type HurstFn = dyn Fn(u32, f64) -> f64 + Send + Sync;

/// A (possibly level-dependent) Hurst function `H_j(t)` on [0, 1].
///
/// Values are clamped into `[HURST_EPS, 1 - HURST_EPS]`; NaN maps to the lower bound.
#[derive(Clone)]
pub struct HurstSpec {
    f: Arc<HurstFn>,
    level_dependent: bool,
    label: String,
}

impl fmt::Debug for HurstSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HurstSpec")
            .field("label", &self.label)
            .field("level_dependent", &self.level_dependent)
            .finish()
    }
}

impl HurstSpec {
    /// Level-independent Hurst function `H(t)`.
    pub fn from_fn(
        label: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        HurstSpec {
            f: Arc::new(move |_, t| f(t)),
            level_dependent: false,
            label: label.into(),
        }
    }

    /// Level-dependent sequence `H_j(t)`, e.g. continuous approximations of a discontinuous target.
    pub fn from_level_fn(
        label: impl Into<String>,
        f: impl Fn(u32, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        HurstSpec {
            f: Arc::new(f),
            level_dependent: true,
            label: label.into(),
        }
    }

    pub fn constant(h: f64) -> Self {
        HurstSpec::from_fn(format!("{h}"), move |_| h)
    }

    /// Piecewise function jumping from `low` to `high` at t = 1/2, approximated at level `j`
    /// by a linear ramp over `[1/2 - 1/(2j), 1/2 + 1/(2j)]` (level 0 uses the level-1 ramp).
    pub fn piecewise_ramp(low: f64, high: f64) -> Self {
        HurstSpec::from_level_fn(format!("piecewise_ramp({low}, {high})"), move |j, t| {
            ramp(low, high, j.max(1) as f64, t)
        })
    }

    /// The ramp with a fixed width parameter for every level.
    pub fn piecewise_ramp_fixed(low: f64, high: f64, width_level: u32) -> Self {
        let m = width_level.max(1) as f64;
        HurstSpec::from_fn(
            format!("piecewise_ramp({low}, {high}; {width_level})"),
            move |t| ramp(low, high, m, t),
        )
    }

    pub fn is_level_dependent(&self) -> bool {
        self.level_dependent
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Unclamped value of the user function.
    pub fn raw(&self, level: u32, t: f64) -> f64 {
        (self.f)(level, t)
    }

    /// Clamped Hurst value; the flag reports whether clamping was applied.
    pub fn eval_checked(&self, level: u32, t: f64) -> (f64, bool) {
        let h = self.raw(level, t);
        if h.is_nan() {
            return (HURST_EPS, true);
        }
        if h < HURST_EPS {
            (HURST_EPS, true)
        } else if h > 1.0 - HURST_EPS {
            (1.0 - HURST_EPS, true)
        } else {
            (h, false)
        }
    }

    pub fn eval(&self, level: u32, t: f64) -> f64 {
        self.eval_checked(level, t).0
    }

    /// `H_{j,k} = H_j(k / 2^j)` for `k = 0..2^j`, with the number of clamped entries.
    pub fn level_values(&self, level: u32) -> (Vec<f64>, usize) {
        let count = 1usize << level;
        let scale = count as f64;
        let mut clamped = 0;
        let values = (0..count)
            .map(|k| {
                let (h, c) = self.eval_checked(level, k as f64 / scale);
                clamped += c as usize;
                h
            })
            .collect();
        (values, clamped)
    }
}

fn ramp(low: f64, high: f64, m: f64, t: f64) -> f64 {
    let lo = 0.5 - 1.0 / (2.0 * m);
    let hi = 0.5 + 1.0 / (2.0 * m);
    if t <= lo {
        low
    } else if t <= hi {
        low + (high - low) * (t - lo) * m
    } else {
        high
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamps_boundary_values() {
        let h = HurstSpec::from_fn("t", |t| t);
        assert_eq!(h.eval(0, 0.0), HURST_EPS);
        assert_eq!(h.eval(3, 1.0), 1.0 - HURST_EPS);
        assert_eq!(h.eval(3, 0.25), 0.25);
        assert!(h.eval_checked(0, 0.0).1);
        assert_eq!(
            HurstSpec::from_fn("nan", |_| f64::NAN).eval(0, 0.5),
            HURST_EPS
        );
    }

    #[test]
    fn level_independent_ignores_level() {
        let h = HurstSpec::constant(0.3);
        assert!(!h.is_level_dependent());
        assert_eq!(h.eval(5, 0.7), 0.3);
        assert_eq!(h.eval(0, 0.7), h.eval(12, 0.7));
    }

    #[test]
    fn ramp_matches_piecewise_listing() {
        // H4 with J = 14: 0.2 up to 0.5 - 1/28, then 0.6 J t + 0.5 - 0.3 J, then 0.8.
        let j = 14.0;
        let h4 = |t: f64| {
            if t <= 0.5 - 1.0 / (2.0 * j) {
                0.2
            } else if t <= 0.5 + 1.0 / (2.0 * j) {
                0.6 * j * t + (0.5 - 0.3 * j)
            } else {
                0.8
            }
        };
        let spec = HurstSpec::piecewise_ramp_fixed(0.2, 0.8, 14);
        let level = HurstSpec::piecewise_ramp(0.2, 0.8);
        for i in 0..=200 {
            let t = i as f64 / 200.0;
            assert!((spec.eval(0, t) - h4(t)).abs() < 1e-12, "t = {t}");
            assert!((level.eval(14, t) - h4(t)).abs() < 1e-12, "t = {t}");
        }
        assert_eq!(level.eval(20, 0.45), 0.2);
        assert!(level.eval(2, 0.49) > 0.2);
    }

    #[test]
    fn level_values_counts_clamps() {
        let (v, c) = HurstSpec::from_fn("t", |t| t).level_values(2);
        assert_eq!(v, vec![HURST_EPS, 0.25, 0.5, 0.75]);
        assert_eq!(c, 1);
    }
}
