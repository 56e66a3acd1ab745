//! Theoretical and empirical covariance matrices of realizations on a shared time grid.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;
use crate::sim::kernel::{kernel_shape, series_coefficients};
use crate::sim::HurstSpec;

/// Default truncation level for the theoretical covariance.
pub const DEFAULT_COV_TRUNCATION: u32 = 8;

/// Upper bound on `points * series terms` for the theoretical covariance.
const MAX_DESIGN_ENTRIES: usize = 1 << 26;

/// Square covariance matrix over an ascending time grid, stored row-major.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(try_from = "CovMatrixRepr")]
pub struct CovMatrix {
    grid: Vec<f64>,
    n: usize,
    entries: Vec<f64>,
}

#[derive(Deserialize)]
struct CovMatrixRepr {
    grid: Vec<f64>,
    entries: Vec<f64>,
}

impl TryFrom<CovMatrixRepr> for CovMatrix {
    type Error = Error;

    fn try_from(r: CovMatrixRepr) -> Result<Self> {
        CovMatrix::new(r.grid, r.entries)
    }
}

impl CovMatrix {
    pub fn new(grid: Vec<f64>, entries: Vec<f64>) -> Result<Self> {
        let n = grid.len();
        if entries.len() != n * n {
            return Err(Error::GridMismatch(format!(
                "{} entries for a {n}-point grid",
                entries.len()
            )));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Data(
                "covariance grid must be strictly increasing".into(),
            ));
        }
        // adding +0.0 turns negative zeros into positive ones
        let entries = entries.into_iter().map(|v| v + 0.0).collect();
        Ok(CovMatrix { grid, n, entries })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn max_abs_diff(&self, other: &CovMatrix) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::GridMismatch(format!(
                "{} vs {} points",
                self.n, other.n
            )));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .fold(0.0, |m, (a, b)| f64::max(m, (a - b).abs())))
    }

    /// CSV with a header of grid times and the grid time leading each row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for t in &self.grid {
            out.push(',');
            out.push_str(&t.to_string());
        }
        out.push('\n');
        for (i, t) in self.grid.iter().enumerate() {
            out.push_str(&t.to_string());
            for v in self.row(i) {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }
}

impl Serialize for CovMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CovMatrix", 3)?;
        st.serialize_field("grid", &self.grid)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("entries", &self.entries)?;
        st.end()
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::domain("empty covariance grid"));
    }
    if let Some(t) = grid.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(Error::domain(format!("grid point {t} outside [0, 1]")));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("covariance grid must be strictly increasing"));
    }
    Ok(())
}

/// Theoretical covariance of the truncated Haar-series process at the grid points,
/// optionally smoothed with bandwidth `theta`.
pub fn cov_ghbmp(
    grid: &[f64],
    hurst: &HurstSpec,
    trunc: u32,
    theta: Option<f64>,
) -> Result<CovMatrix> {
    check_grid(grid)?;
    let terms = (2usize << trunc.min(40)) - 1;
    if trunc > 40 || terms.saturating_mul(grid.len()) > MAX_DESIGN_ENTRIES {
        return Err(Error::Resource(format!(
            "{} points with truncation {trunc} exceed the design-matrix limit",
            grid.len()
        )));
    }
    // per term: level scale, exponent a, weight 2^{-jH} and far-field coefficients
    let mut consts = Vec::with_capacity(terms);
    for j in 0..=trunc {
        let (hs, _) = hurst.level_values(j);
        let scale = (j as f64).exp2();
        for (k, h) in hs.into_iter().enumerate() {
            let a = h + 0.5;
            consts.push((j, k, scale, a, scale.powf(-h), series_coefficients(a)));
        }
    }
    let design: Vec<Vec<f64>> = grid
        .par_iter()
        .map(|&t| {
            consts
                .iter()
                .map(|(_, k, scale, a, w, c)| w * kernel_shape(scale * t - *k as f64, *a, c))
                .collect()
        })
        .collect();
    let n = grid.len();
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i..n)
                .map(|j| design[i].iter().zip(&design[j]).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect();
    let c = CovMatrix::new(grid.to_vec(), symmetric_from_upper(&upper, n))?;
    match theta {
        Some(th) => smooth_matrix(&c, th),
        None => Ok(c),
    }
}

fn symmetric_from_upper(upper: &[Vec<f64>], n: usize) -> Vec<f64> {
    let mut entries = vec![0.0; n * n];
    for (i, row) in upper.iter().enumerate() {
        for (off, v) in row.iter().enumerate() {
            let j = i + off;
            entries[i * n + j] = *v;
            entries[j * n + i] = *v;
        }
    }
    entries
}

/// Empirical covariance with divisor `M`, optionally smoothed.
pub fn est_cov(realizations: &[TimeSeries], theta: Option<f64>) -> Result<CovMatrix> {
    let first = realizations
        .first()
        .ok_or_else(|| Error::domain("at least one realization is required"))?;
    let grid = first.times();
    for (i, r) in realizations.iter().enumerate().skip(1) {
        if r.times() != grid {
            return Err(Error::GridMismatch(format!(
                "realization {i} does not share the grid of realization 0"
            )));
        }
    }
    let m = realizations.len() as f64;
    let n = grid.len();
    let mean: Vec<f64> = (0..n)
        .map(|i| realizations.iter().map(|r| r.values()[i]).sum::<f64>() / m)
        .collect();
    let dev: Vec<Vec<f64>> = realizations
        .iter()
        .map(|r| r.values().iter().zip(&mean).map(|(x, mu)| x - mu).collect())
        .collect();
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i..n)
                .map(|j| dev.iter().map(|d| d[i] * d[j]).sum::<f64>() / m)
                .collect()
        })
        .collect();
    let c = CovMatrix::new(grid.to_vec(), symmetric_from_upper(&upper, n))?;
    match theta {
        Some(th) => smooth_matrix(&c, th),
        None => Ok(c),
    }
}

/// Separable Gaussian smoothing `S = W C W^T` with row-normalized weights
/// `exp(-(t_i - t_k)^2 / (2 theta^2))`, symmetrized as `(S + S^T) / 2`.
pub fn smooth_matrix(c: &CovMatrix, theta: f64) -> Result<CovMatrix> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::domain(format!(
            "smoothing bandwidth {theta} must be positive"
        )));
    }
    let n = c.n;
    let g = &c.grid;
    let mut w = vec![0.0; n * n];
    for i in 0..n {
        let row = &mut w[i * n..(i + 1) * n];
        for (k, slot) in row.iter_mut().enumerate() {
            let d = (g[i] - g[k]) / theta;
            *slot = (-0.5 * d * d).exp();
        }
        let z: f64 = row.iter().sum();
        row.iter_mut().for_each(|v| *v /= z);
    }
    // T = W C
    let t: Vec<f64> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let wi = &w[i * n..(i + 1) * n];
            (0..n).map(move |j| (0..n).map(|k| wi[k] * c.entries[k * n + j]).sum::<f64>())
        })
        .collect();
    // S = T W^T
    let s: Vec<f64> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let ti = &t[i * n..(i + 1) * n];
            let w = &w;
            (0..n).map(move |j| {
                let wj = &w[j * n..(j + 1) * n];
                ti.iter().zip(wj).map(|(a, b)| a * b).sum::<f64>()
            })
        })
        .collect();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            entries[i * n + j] = 0.5 * (s[i * n + j] + s[j * n + i]);
        }
    }
    CovMatrix::new(c.grid.clone(), entries)
}
