//! Local linear regression with tricube weights over nearest neighbors.

use crate::error::{Error, Result};

use super::gqv::HurstEstimate;

/// Default fraction of points in each local fit.
pub const DEFAULT_SPAN: f64 = 0.75;

fn tricube(u: f64) -> f64 {
    if u >= 1.0 {
        0.0
    } else {
        let c = 1.0 - u * u * u;
        c * c * c
    }
}

/// Smooth `y` observed at `x` by a weighted linear fit at each `x_i` using the
/// `ceil(span * n)` nearest neighbors.
pub fn loess(x: &[f64], y: &[f64], span: f64) -> Result<Vec<f64>> {
    if x.len() != y.len() {
        return Err(Error::GridMismatch(format!(
            "{} abscissae for {} values",
            x.len(),
            y.len()
        )));
    }
    if !(span > 0.0 && span <= 1.0) {
        return Err(Error::domain(format!("span {span} outside (0, 1]")));
    }
    let n = x.len();
    if n < 3 {
        return Ok(y.to_vec());
    }
    let q = ((span * n as f64).ceil() as usize).clamp(2, n);
    let mut dist = vec![0.0; n];
    let mut sorted = vec![0.0; n];
    let out = (0..n)
        .map(|i| {
            for (d, xj) in dist.iter_mut().zip(x) {
                *d = (xj - x[i]).abs();
            }
            sorted.copy_from_slice(&dist);
            sorted.sort_unstable_by(f64::total_cmp);
            let h = sorted[q - 1];
            if h <= 0.0 {
                return y[i];
            }
            let (mut sw, mut sx, mut sy) = (0.0, 0.0, 0.0);
            for j in 0..n {
                let w = tricube(dist[j] / h);
                sw += w;
                sx += w * x[j];
                sy += w * y[j];
            }
            let (mx, my) = (sx / sw, sy / sw);
            let (mut sxx, mut sxy) = (0.0, 0.0);
            for j in 0..n {
                let w = tricube(dist[j] / h);
                let dx = x[j] - mx;
                sxx += w * dx * dx;
                sxy += w * dx * (y[j] - my);
            }
            if sxx <= 1e-14 * h * h * sw {
                my
            } else {
                my + sxy / sxx * (x[i] - mx)
            }
        })
        .collect();
    Ok(out)
}

/// Attach smoothed values to an estimate, clamped to the quantity's range.
pub fn smooth_estimate(est: &mut HurstEstimate, span: f64) -> Result<()> {
    let xs: Vec<f64> = (0..est.raw.len()).map(|i| i as f64).collect();
    let (lo, hi) = est.quantity.range();
    let s = loess(&xs, &est.raw, span)?;
    est.smoothed = Some(s.into_iter().map(|v| v.clamp(lo, hi)).collect());
    Ok(())
}
