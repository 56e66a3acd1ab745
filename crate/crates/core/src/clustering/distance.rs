//! Distances between feature vectors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A distance between equal-length vectors. Implement this to plug in further metrics.
pub trait Distance: Sync {
    fn distance(&self, u: &[f64], v: &[f64]) -> f64;
}

/// Built-in metrics.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum DistanceMethod {
    #[default]
    Euclidean,
    Manhattan,
    Minkowski(f64),
    Supremum,
    Canberra,
}

impl DistanceMethod {
    pub fn minkowski(p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::domain(format!(
                "Minkowski exponent {p} must be at least 1"
            )));
        }
        Ok(DistanceMethod::Minkowski(p))
    }
}

impl Distance for DistanceMethod {
    fn distance(&self, u: &[f64], v: &[f64]) -> f64 {
        let diffs = u.iter().zip(v).map(|(a, b)| (a - b).abs());
        match *self {
            DistanceMethod::Euclidean => diffs.map(|d| d * d).sum::<f64>().sqrt(),
            DistanceMethod::Manhattan => diffs.sum(),
            DistanceMethod::Minkowski(p) => diffs.map(|d| d.powf(p)).sum::<f64>().powf(1.0 / p),
            DistanceMethod::Supremum => diffs.fold(0.0, f64::max),
            DistanceMethod::Canberra => u
                .iter()
                .zip(v)
                .map(|(a, b)| {
                    let den = a.abs() + b.abs();
                    if den == 0.0 {
                        0.0
                    } else {
                        (a - b).abs() / den
                    }
                })
                .sum(),
        }
    }
}

impl fmt::Display for DistanceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceMethod::Euclidean => f.write_str("euclidean"),
            DistanceMethod::Manhattan => f.write_str("manhattan"),
            DistanceMethod::Minkowski(p) => write!(f, "minkowski:{p}"),
            DistanceMethod::Supremum => f.write_str("supremum"),
            DistanceMethod::Canberra => f.write_str("canberra"),
        }
    }
}

/// Accepts `euclidean`, `manhattan`, `supremum` (or `maximum`), `canberra` and `minkowski:p`.
impl FromStr for DistanceMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        if let Some(p) = lower.strip_prefix("minkowski") {
            let p = p.trim_start_matches([':', '=']);
            let p = if p.is_empty() {
                2.0
            } else {
                p.parse()
                    .map_err(|_| Error::domain(format!("invalid Minkowski exponent `{p}`")))?
            };
            return DistanceMethod::minkowski(p);
        }
        Ok(match lower.as_str() {
            "euclidean" => DistanceMethod::Euclidean,
            "manhattan" => DistanceMethod::Manhattan,
            "supremum" | "maximum" => DistanceMethod::Supremum,
            "canberra" => DistanceMethod::Canberra,
            _ => return Err(Error::domain(format!("unknown distance method `{s}`"))),
        })
    }
}

impl TryFrom<String> for DistanceMethod {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<DistanceMethod> for String {
    fn from(d: DistanceMethod) -> String {
        d.to_string()
    }
}

/// Distance between two vectors with length checking.
pub fn pairwise_distance(u: &[f64], v: &[f64], method: &dyn Distance) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::GridMismatch(format!(
            "vectors of length {} and {}",
            u.len(),
            v.len()
        )));
    }
    Ok(method.distance(u, v))
}

/// Full symmetric distance matrix, row-major.
pub fn distance_matrix(rows: &[Vec<f64>], method: &dyn Distance) -> Vec<f64> {
    use rayon::prelude::*;
    let n = rows.len();
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..n)
                .map(|j| method.distance(&rows[i], &rows[j]))
                .collect()
        })
        .collect();
    let mut d = vec![0.0; n * n];
    for (i, row) in upper.iter().enumerate() {
        for (off, v) in row.iter().enumerate() {
            let j = i + 1 + off;
            d[i * n + j] = *v;
            d[j * n + i] = *v;
        }
    }
    d
}
