//! Clustering of realizations by their smoothed Hurst-function estimates.

mod ari;
mod distance;
mod hclust;
mod kmeans;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use ari::adjusted_rand_index;
pub use distance::{distance_matrix, pairwise_distance, Distance, DistanceMethod};
pub use hclust::{hclust, Linkage, MergeStep, MergeTree};
pub use kmeans::{kmeans, KmeansFit, DEFAULT_ITER_MAX};

use crate::error::{Error, Result};
use crate::estimation::{estimate_hurst, smooth_estimate, EstimatorParams, DEFAULT_SPAN};
use crate::series::TimeSeries;
use crate::sim::SimSeed;

/// One Hurst-estimate vector per realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    pub row_ids: Vec<usize>,
    pub rows: Vec<Vec<f64>>,
}

/// Raw and smoothed Hurst estimates of every realization, estimated in parallel.
pub fn hurst_features(
    realizations: &[TimeSeries],
    params: &EstimatorParams,
    span: f64,
) -> Result<(FeatureMatrix, FeatureMatrix)> {
    let pairs: Vec<(Vec<f64>, Vec<f64>)> = realizations
        .par_iter()
        .enumerate()
        .map(|(index, x)| {
            let wrap = |e| Error::Item {
                index,
                source: Box::new(e),
            };
            let mut est = estimate_hurst(x, params).map_err(wrap)?;
            smooth_estimate(&mut est, span).map_err(wrap)?;
            let smoothed = est.smoothed.take().unwrap_or_default();
            Ok((est.raw, smoothed))
        })
        .collect::<Result<_>>()?;
    let row_ids: Vec<usize> = (0..realizations.len()).collect();
    let (raw, smoothed) = pairs.into_iter().unzip();
    Ok((
        FeatureMatrix {
            row_ids: row_ids.clone(),
            rows: raw,
        },
        FeatureMatrix {
            row_ids,
            rows: smoothed,
        },
    ))
}

/// Parameters of a clustering run, echoed in the result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterCall {
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    pub distance: DistanceMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linkage: Option<Linkage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iter_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nstart: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<SimSeed>,
    pub params: EstimatorParams,
    pub span: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterResult {
    /// Labels `1..=k` per realization.
    pub cluster: Vec<usize>,
    pub cluster_sizes: Vec<usize>,
    pub centers: Vec<Vec<f64>>,
    /// Distance of each realization's features to its cluster center.
    pub cluster_info: Vec<f64>,
    pub smoothed_hurst_estimates: FeatureMatrix,
    pub raw_hurst_estimates: FeatureMatrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub merge_tree: Option<MergeTree>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wcss: Option<f64>,
    pub call: ClusterCall,
}

impl ClusterResult {
    /// CSV with one line per realization: id, cluster, distance to center.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("realization,cluster,distance_from_center\n");
        for (i, (c, d)) in self.cluster.iter().zip(&self.cluster_info).enumerate() {
            out.push_str(&format!(
                "{},{c},{d}\n",
                self.smoothed_hurst_estimates.row_ids[i]
            ));
        }
        out
    }
}

/// Coordinate-wise means of member rows for labels `1..=k`.
pub fn cluster_centers(rows: &[Vec<f64>], labels: &[usize], k: usize) -> Vec<Vec<f64>> {
    let dim = rows.first().map_or(0, Vec::len);
    let mut sums = vec![vec![0.0; dim]; k];
    let mut counts = vec![0usize; k];
    for (r, &l) in rows.iter().zip(labels) {
        counts[l - 1] += 1;
        for (s, v) in sums[l - 1].iter_mut().zip(r) {
            *s += v;
        }
    }
    sums.into_iter()
        .zip(counts)
        .map(|(s, c)| s.into_iter().map(|v| v / c.max(1) as f64).collect())
        .collect()
}

fn sizes(labels: &[usize], k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for &l in labels {
        out[l - 1] += 1;
    }
    out
}

fn distances_to_centers(
    rows: &[Vec<f64>],
    labels: &[usize],
    centers: &[Vec<f64>],
    metric: &dyn Distance,
) -> Vec<f64> {
    rows.iter()
        .zip(labels)
        .map(|(r, &l)| metric.distance(r, &centers[l - 1]))
        .collect()
}

/// Options for hierarchical clustering of realizations.
#[derive(Debug, Clone, PartialEq)]
pub struct HclustOptions {
    pub k: Option<usize>,
    pub h: Option<f64>,
    pub distance: DistanceMethod,
    pub linkage: Linkage,
    pub params: EstimatorParams,
    pub span: f64,
}

impl Default for HclustOptions {
    fn default() -> Self {
        HclustOptions {
            k: None,
            h: None,
            distance: DistanceMethod::Euclidean,
            linkage: Linkage::Complete,
            params: EstimatorParams::default(),
            span: DEFAULT_SPAN,
        }
    }
}

/// Hierarchical clustering on precomputed features; `k` takes precedence over `h`.
pub fn hclust_features(
    raw: FeatureMatrix,
    smoothed: FeatureMatrix,
    opts: &HclustOptions,
) -> Result<ClusterResult> {
    let rows = &smoothed.rows;
    if rows.len() < 2 {
        return Err(Error::domain(format!(
            "need at least 2 realizations, got {}",
            rows.len()
        )));
    }
    let d = distance_matrix(rows, &opts.distance);
    let tree = hclust(&d, rows.len(), opts.linkage)?;
    let labels = match (opts.k, opts.h) {
        (Some(k), _) => tree.cut_k(k)?,
        (None, Some(h)) => tree.cut_height(h)?,
        (None, None) => return Err(Error::domain("either k or h must be given")),
    };
    let k = labels.iter().copied().max().unwrap_or(0);
    let centers = cluster_centers(rows, &labels, k);
    Ok(ClusterResult {
        cluster_sizes: sizes(&labels, k),
        cluster_info: distances_to_centers(rows, &labels, &centers, &opts.distance),
        cluster: labels,
        centers,
        raw_hurst_estimates: raw,
        merge_tree: Some(tree),
        wcss: None,
        call: ClusterCall {
            method: "hclust".into(),
            k: opts.k,
            h: if opts.k.is_some() { None } else { opts.h },
            distance: opts.distance,
            linkage: Some(opts.linkage),
            iter_max: None,
            nstart: None,
            seed: None,
            params: opts.params,
            span: opts.span,
        },
        smoothed_hurst_estimates: smoothed,
    })
}

/// Estimate, smooth and hierarchically cluster realizations.
pub fn hclust_hurst(realizations: &[TimeSeries], opts: &HclustOptions) -> Result<ClusterResult> {
    if realizations.len() < 2 {
        return Err(Error::domain(format!(
            "need at least 2 realizations, got {}",
            realizations.len()
        )));
    }
    if opts.k.is_none() && opts.h.is_none() {
        return Err(Error::domain("either k or h must be given"));
    }
    let (raw, smoothed) = hurst_features(realizations, &opts.params, opts.span)?;
    hclust_features(raw, smoothed, opts)
}

/// Options for k-means clustering of realizations.
#[derive(Debug, Clone, PartialEq)]
pub struct KmeansOptions {
    pub k: usize,
    pub iter_max: usize,
    pub nstart: usize,
    pub seed: SimSeed,
    pub params: EstimatorParams,
    pub span: f64,
}

impl KmeansOptions {
    pub fn new(k: usize, seed: SimSeed) -> Self {
        KmeansOptions {
            k,
            iter_max: DEFAULT_ITER_MAX,
            nstart: 1,
            seed,
            params: EstimatorParams::default(),
            span: DEFAULT_SPAN,
        }
    }
}

/// k-means on precomputed features.
pub fn kmeans_features(
    raw: FeatureMatrix,
    smoothed: FeatureMatrix,
    opts: &KmeansOptions,
) -> Result<ClusterResult> {
    let rows = &smoothed.rows;
    let fit = kmeans(rows, opts.k, opts.iter_max, opts.nstart, opts.seed)?;
    let info = distances_to_centers(rows, &fit.cluster, &fit.centers, &DistanceMethod::Euclidean);
    Ok(ClusterResult {
        cluster_sizes: sizes(&fit.cluster, opts.k),
        cluster_info: info,
        cluster: fit.cluster,
        centers: fit.centers,
        raw_hurst_estimates: raw,
        merge_tree: None,
        wcss: Some(fit.wcss),
        call: ClusterCall {
            method: "kmeans".into(),
            k: Some(opts.k),
            h: None,
            distance: DistanceMethod::Euclidean,
            linkage: None,
            iter_max: Some(opts.iter_max),
            nstart: Some(opts.nstart),
            seed: Some(opts.seed),
            params: opts.params,
            span: opts.span,
        },
        smoothed_hurst_estimates: smoothed,
    })
}

/// Estimate, smooth and cluster realizations with k-means.
pub fn kmeans_hurst(realizations: &[TimeSeries], opts: &KmeansOptions) -> Result<ClusterResult> {
    if opts.k == 0 || opts.k > realizations.len() {
        return Err(Error::domain(format!(
            "k = {} outside 1..={}",
            opts.k,
            realizations.len()
        )));
    }
    let (raw, smoothed) = hurst_features(realizations, &opts.params, opts.span)?;
    kmeans_features(raw, smoothed, opts)
}
