//! Brownian motion, Brownian bridge, fractional Gaussian noise, fBm and the fractional bridge.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::innovations::{normals, SimSeed, BM_STREAM, FGN_STREAM};
use crate::error::{Error, Result};
use crate::series::{is_uniform, GridSpec, TimeSeries};

fn check_hurst(h: f64) -> Result<()> {
    if h > 0.0 && h < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("Hurst parameter {h} outside (0, 1)")))
    }
}

/// Brownian motion started at 0 on an arbitrary increasing grid.
pub fn simulate_bm(grid: &GridSpec, seed: SimSeed) -> Result<TimeSeries> {
    let times = grid.times()?;
    let z = normals(&mut seed.rng(BM_STREAM), times.len() - 1);
    let mut values = Vec::with_capacity(times.len());
    let mut x = 0.0;
    values.push(x);
    for (w, zi) in times.windows(2).zip(z) {
        x += (w[1] - w[0]).sqrt() * zi;
        values.push(x);
    }
    TimeSeries::new(times, values)
}

/// Brownian bridge from 0 at the grid start to `terminal` at the grid end.
pub fn simulate_bbridge(grid: &GridSpec, terminal: f64, seed: SimSeed) -> Result<TimeSeries> {
    let (times, x) = simulate_bm(grid, seed)?.into_parts();
    let t0 = times[0];
    let span = times[times.len() - 1] - t0;
    let gap = x[x.len() - 1] - terminal;
    let mut values: Vec<f64> = times
        .iter()
        .zip(&x)
        .map(|(t, v)| v - (t - t0) / span * gap)
        .collect();
    *values.last_mut().unwrap() = terminal;
    TimeSeries::new(times, values)
}

/// Autocovariance of unit-variance fractional Gaussian noise at integer lag `k`.
pub fn fgn_autocovariance(hurst: f64, lag: usize) -> f64 {
    let k = lag as f64;
    let p = 2.0 * hurst;
    0.5 * ((k + 1.0).powf(p) - 2.0 * k.powf(p) + (k - 1.0).abs().powf(p))
}

/// `n` samples of unit-step fractional Gaussian noise (exact circulant embedding).
pub fn simulate_fgn(n: usize, hurst: f64, seed: SimSeed) -> Result<Vec<f64>> {
    check_hurst(hurst)?;
    if n == 0 {
        return Err(Error::domain("fGn length must be at least 1"));
    }
    let mut rng = seed.rng(FGN_STREAM);
    if n == 1 {
        return Ok(normals(&mut rng, 1));
    }
    match circulant_eigenvalues(n, hurst) {
        Some(eig) => Ok(davies_harte(n, &eig, &mut rng)),
        None => cholesky_fgn(n, hurst, &mut rng),
    }
}

/// Eigenvalues of the minimal circulant embedding, or `None` if it is not nonnegative definite.
fn circulant_eigenvalues(n: usize, hurst: f64) -> Option<Vec<f64>> {
    let m = 2 * n;
    let mut row: Vec<Complex<f64>> = (0..m)
        .map(|i| {
            let lag = if i <= n { i } else { m - i };
            Complex::new(fgn_autocovariance(hurst, lag), 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut row);
    let max = row.iter().map(|c| c.re).fold(0.0, f64::max);
    let tol = 1e-10 * max.max(1.0);
    if row.iter().any(|c| c.re < -tol) {
        return None;
    }
    Some(row.iter().map(|c| c.re.max(0.0)).collect())
}

fn davies_harte(n: usize, eig: &[f64], rng: &mut rand_chacha::ChaCha8Rng) -> Vec<f64> {
    let m = eig.len();
    let z = normals(rng, 2 * m);
    let inv_m = 1.0 / m as f64;
    let mut buf: Vec<Complex<f64>> = eig
        .iter()
        .enumerate()
        .map(|(k, &l)| {
            let s = (l * inv_m).sqrt();
            Complex::new(s * z[2 * k], s * z[2 * k + 1])
        })
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    buf[..n].iter().map(|c| c.re).collect()
}

fn cholesky_fgn(n: usize, hurst: f64, rng: &mut rand_chacha::ChaCha8Rng) -> Result<Vec<f64>> {
    if n > 8192 {
        return Err(Error::Resource(format!(
            "Cholesky fallback limited to 8192 points, got {n}"
        )));
    }
    let gamma: Vec<f64> = (0..n).map(|k| fgn_autocovariance(hurst, k)).collect();
    let lower = cholesky_toeplitz(&gamma)?;
    let z = normals(rng, n);
    Ok((0..n)
        .map(|i| (0..=i).map(|j| lower[i * n + j] * z[j]).sum())
        .collect())
}

/// Dense lower Cholesky factor of the symmetric Toeplitz matrix with first row `gamma`.
fn cholesky_toeplitz(gamma: &[f64]) -> Result<Vec<f64>> {
    let n = gamma.len();
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = gamma[i - j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 {
                    return Err(Error::domain("covariance matrix is not positive definite"));
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Ok(l)
}

/// Fractional Brownian motion on a uniform grid, started at 0.
pub fn simulate_fbm(grid: &GridSpec, hurst: f64, seed: SimSeed) -> Result<TimeSeries> {
    check_hurst(hurst)?;
    let times = grid.times()?;
    if !is_uniform(&times) {
        return Err(Error::domain("fBm simulation requires a uniform grid"));
    }
    let n = times.len() - 1;
    let step = (times[n] - times[0]) / n as f64;
    let noise = simulate_fgn(n, hurst, seed)?;
    let scale = step.powf(hurst);
    let mut values = Vec::with_capacity(n + 1);
    let mut x = 0.0;
    values.push(x);
    for g in noise {
        x += scale * g;
        values.push(x);
    }
    TimeSeries::new(times, values)
}

/// Fractional Brownian bridge ending at `terminal`.
pub fn simulate_fbbridge(
    grid: &GridSpec,
    hurst: f64,
    terminal: f64,
    seed: SimSeed,
) -> Result<TimeSeries> {
    let (times, x) = simulate_fbm(grid, hurst, seed)?.into_parts();
    let t0 = times[0];
    let span = times[times.len() - 1] - t0;
    let gap = x[x.len() - 1] - terminal;
    let p = 2.0 * hurst;
    let mut values: Vec<f64> = times
        .iter()
        .zip(&x)
        .map(|(t, v)| {
            let r = (t - t0) / span;
            v - 0.5 * gap * (1.0 + r.powf(p) - (1.0 - r).powf(p))
        })
        .collect();
    *values.last_mut().unwrap() = terminal;
    TimeSeries::new(times, values)
}
