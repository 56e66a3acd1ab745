//! Lloyd's k-means with seeded restarts.

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::SimSeed;

const KMEANS_STREAM: u64 = 3;

pub const DEFAULT_ITER_MAX: usize = 10;

/// Outcome of the best restart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KmeansFit {
    /// Labels `1..=k`.
    pub cluster: Vec<usize>,
    pub centers: Vec<Vec<f64>>,
    pub wcss: f64,
    /// Within-cluster sum of squares after each center update of the chosen restart.
    pub wcss_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Index of the chosen restart.
    pub start: usize,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(row: &[f64], centers: &[Vec<f64>]) -> usize {
    let mut best = (f64::INFINITY, 0);
    for (c, center) in centers.iter().enumerate() {
        let d = sq_dist(row, center);
        if d < best.0 {
            best = (d, c);
        }
    }
    best.1
}

fn wcss(rows: &[Vec<f64>], assign: &[usize], centers: &[Vec<f64>]) -> f64 {
    rows.iter()
        .zip(assign)
        .map(|(r, &a)| sq_dist(r, &centers[a]))
        .sum()
}

fn lloyd(rows: &[Vec<f64>], mut centers: Vec<Vec<f64>>, iter_max: usize) -> KmeansFit {
    let k = centers.len();
    let dim = rows[0].len();
    let mut assign: Vec<usize> = rows.iter().map(|r| nearest(r, &centers)).collect();
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < iter_max {
        iterations += 1;
        // an empty cluster takes over the point farthest from its current center
        let mut taken = vec![false; rows.len()];
        for c in 0..k {
            if assign.contains(&c) {
                continue;
            }
            let far = (0..rows.len())
                .filter(|&i| !taken[i] && assign.iter().filter(|&&a| a == assign[i]).count() > 1)
                .map(|i| (sq_dist(&rows[i], &centers[assign[i]]), i))
                .fold(None, |best: Option<(f64, usize)>, cand| match best {
                    Some(b) if b.0 >= cand.0 => Some(b),
                    _ => Some(cand),
                });
            if let Some((_, i)) = far {
                assign[i] = c;
                taken[i] = true;
                centers[c] = rows[i].clone();
            }
        }
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (r, &a) in rows.iter().zip(&assign) {
            counts[a] += 1;
            for (s, v) in sums[a].iter_mut().zip(r) {
                *s += v;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                centers[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
        history.push(wcss(rows, &assign, &centers));
        let next: Vec<usize> = rows.iter().map(|r| nearest(r, &centers)).collect();
        if next == assign {
            converged = true;
            break;
        }
        assign = next;
    }
    if !converged {
        log::warn!("k-means did not converge in {iter_max} iterations");
    }
    let total = wcss(rows, &assign, &centers);
    KmeansFit {
        cluster: assign.into_iter().map(|a| a + 1).collect(),
        centers,
        wcss: total,
        wcss_history: history,
        iterations,
        converged,
        start: 0,
    }
}

/// Run `nstart` Lloyd restarts from `k` distinct random rows and keep the lowest WCSS.
pub fn kmeans(
    rows: &[Vec<f64>],
    k: usize,
    iter_max: usize,
    nstart: usize,
    seed: SimSeed,
) -> Result<KmeansFit> {
    let n = rows.len();
    if k == 0 || k > n {
        return Err(Error::domain(format!("k = {k} outside 1..={n}")));
    }
    if iter_max == 0 || nstart == 0 {
        return Err(Error::domain("iter_max and nstart must be at least 1"));
    }
    let dim = rows[0].len();
    if rows.iter().any(|r| r.len() != dim) {
        return Err(Error::GridMismatch("feature rows differ in length".into()));
    }
    let mut rng = seed.rng(KMEANS_STREAM);
    let mut best: Option<KmeansFit> = None;
    for start in 0..nstart {
        let centers = sample(&mut rng, n, k)
            .iter()
            .map(|i| rows[i].clone())
            .collect();
        let mut fit = lloyd(rows, centers, iter_max);
        fit.start = start;
        if best.as_ref().is_none_or(|b| fit.wcss < b.wcss) {
            best = Some(fit);
        }
    }
    Ok(best.expect("nstart >= 1"))
}
