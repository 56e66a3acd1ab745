//! Closed form of the Haar-wavelet integral kernel
//! `∫_0^1 (t - s)_+^{H - 1/2} h_{j,k}(s) ds = 2^{-jH} h^{[H]}(2^j t - k)`.

use crate::error::{Error, Result};

/// Beyond this offset the three-term difference is replaced by its binomial series.
pub(crate) const FAR_FIELD: f64 = 16.0;
/// Number of retained series terms; the first omitted one is below 1e-18 relative.
pub(crate) const SERIES_TERMS: usize = 6;

/// `2^{-jH} h^{[H]}(2^j t - k)` for level `j`, translate `k < 2^j` and `H ∈ (0, 1)`.
///
/// Vanishes for `t ≤ k / 2^j`.
pub fn haar_kernel(level: u32, translate: u64, hurst: f64, t: f64) -> Result<f64> {
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(Error::domain(format!("Hurst value {hurst} outside (0, 1)")));
    }
    if level > 62 || translate >= (1u64 << level) {
        return Err(Error::domain(format!(
            "translate {translate} out of range for level {level}"
        )));
    }
    if !t.is_finite() {
        return Err(Error::domain("kernel evaluated at a non-finite time"));
    }
    let scale = (level as f64).exp2();
    let x = scale * t - translate as f64;
    let a = hurst + 0.5;
    Ok(kernel_shape(x, a, &series_coefficients(a)) * scale.powf(-hurst))
}

/// `h^{[H]}(x)` with `a = H + 1/2`.
pub(crate) fn kernel_shape(x: f64, a: f64, coeffs: &[f64; SERIES_TERMS]) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x < FAR_FIELD {
        near_shape(x, a)
    } else {
        far_shape(x - 0.5, a, coeffs)
    }
}

#[inline]
pub(crate) fn near_shape(x: f64, a: f64) -> f64 {
    let mut v = x.powf(a);
    if x > 0.5 {
        v -= 2.0 * (x - 0.5).powf(a);
    }
    if x > 1.0 {
        v += (x - 1.0).powf(a);
    }
    v / a
}

/// Series for `[(y + 1/2)^a - 2 y^a + (y - 1/2)^a] / a` in powers of `w = 1/(4 y^2)`.
#[inline]
pub(crate) fn far_shape(y: f64, a: f64, coeffs: &[f64; SERIES_TERMS]) -> f64 {
    series_shape(y.powf(a), 0.25 / (y * y), coeffs)
}

/// Far-field series given `y^a` and `w = 1/(4 y^2)`.
#[inline]
pub(crate) fn series_shape(ya: f64, w: f64, coeffs: &[f64; SERIES_TERMS]) -> f64 {
    let mut acc = coeffs[SERIES_TERMS - 1];
    for c in coeffs[..SERIES_TERMS - 1].iter().rev() {
        acc = acc * w + c;
    }
    ya * w * acc
}

/// `2 binom(a, 2m) / a` for `m = 1..=SERIES_TERMS`.
pub(crate) fn series_coefficients(a: f64) -> [f64; SERIES_TERMS] {
    let mut out = [0.0; SERIES_TERMS];
    let mut binom = 1.0;
    for (m, slot) in out.iter_mut().enumerate() {
        let two_m = 2.0 * (m as f64 + 1.0);
        binom *= (a - two_m + 2.0) * (a - two_m + 1.0) / ((two_m - 1.0) * two_m);
        *slot = 2.0 * binom / a;
    }
    out
}
