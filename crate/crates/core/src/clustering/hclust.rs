//! Agglomerative hierarchical clustering with Lance-Williams updates.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Linkage {
    Single,
    #[default]
    Complete,
    Average,
    WardD,
    WardD2,
    Mcquitty,
    Median,
    Centroid,
}

impl Linkage {
    pub const ALL: [Linkage; 8] = [
        Linkage::Single,
        Linkage::Complete,
        Linkage::Average,
        Linkage::WardD,
        Linkage::WardD2,
        Linkage::Mcquitty,
        Linkage::Median,
        Linkage::Centroid,
    ];

    /// Whether merge heights are guaranteed to be nondecreasing.
    pub fn is_monotone(self) -> bool {
        !matches!(self, Linkage::Median | Linkage::Centroid)
    }

    /// Linkages whose update rule works on squared Euclidean-type distances.
    fn squares_input(self) -> bool {
        matches!(self, Linkage::WardD2 | Linkage::Median | Linkage::Centroid)
    }

    fn update(self, dik: f64, djk: f64, dij: f64, ni: f64, nj: f64, nk: f64) -> f64 {
        match self {
            Linkage::Single => dik.min(djk),
            Linkage::Complete => dik.max(djk),
            Linkage::Average => (ni * dik + nj * djk) / (ni + nj),
            Linkage::Mcquitty => 0.5 * (dik + djk),
            Linkage::Median => 0.5 * dik + 0.5 * djk - 0.25 * dij,
            Linkage::Centroid => {
                let s = ni + nj;
                (ni * dik + nj * djk) / s - ni * nj * dij / (s * s)
            }
            Linkage::WardD | Linkage::WardD2 => {
                ((ni + nk) * dik + (nj + nk) * djk - nk * dij) / (ni + nj + nk)
            }
        }
    }
}

impl fmt::Display for Linkage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Linkage::Single => "single",
            Linkage::Complete => "complete",
            Linkage::Average => "average",
            Linkage::WardD => "ward.D",
            Linkage::WardD2 => "ward.D2",
            Linkage::Mcquitty => "mcquitty",
            Linkage::Median => "median",
            Linkage::Centroid => "centroid",
        })
    }
}

impl FromStr for Linkage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "single" => Linkage::Single,
            "complete" => Linkage::Complete,
            "average" => Linkage::Average,
            "ward.d" | "ward_d" => Linkage::WardD,
            "ward.d2" | "ward_d2" | "ward" => Linkage::WardD2,
            "mcquitty" => Linkage::Mcquitty,
            "median" => Linkage::Median,
            "centroid" => Linkage::Centroid,
            _ => return Err(Error::domain(format!("unknown linkage `{s}`"))),
        })
    }
}

impl TryFrom<String> for Linkage {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Linkage> for String {
    fn from(l: Linkage) -> String {
        l.to_string()
    }
}

/// One agglomeration step. Items are `0..n`; the cluster formed at step `s` has id `n + s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MergeStep {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    /// Number of items in the merged cluster.
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeTree {
    pub items: usize,
    pub linkage: Linkage,
    pub steps: Vec<MergeStep>,
}

/// Cluster a full row-major dissimilarity matrix of `n` items.
///
/// Among equally close pairs the one with the smallest (lower, upper) member minima merges first.
pub fn hclust(dist: &[f64], n: usize, linkage: Linkage) -> Result<MergeTree> {
    if n < 2 {
        return Err(Error::domain(format!(
            "need at least 2 items to cluster, got {n}"
        )));
    }
    if dist.len() != n * n {
        return Err(Error::GridMismatch(format!(
            "{} distances for {n} items",
            dist.len()
        )));
    }
    if dist.iter().any(|d| !d.is_finite() || *d < 0.0) {
        return Err(Error::domain("distances must be finite and nonnegative"));
    }
    let sq = linkage.squares_input();
    let mut d: Vec<f64> = if sq {
        dist.iter().map(|v| v * v).collect()
    } else {
        dist.to_vec()
    };
    // slot i holds the cluster whose smallest member is i
    let mut active = vec![true; n];
    let mut size = vec![1usize; n];
    let mut id: Vec<usize> = (0..n).collect();
    let mut steps = Vec::with_capacity(n - 1);
    for s in 0..n - 1 {
        let mut best = (f64::INFINITY, usize::MAX, usize::MAX);
        for i in (0..n).filter(|&i| active[i]) {
            for j in ((i + 1)..n).filter(|&j| active[j]) {
                let v = d[i * n + j];
                if v < best.0 {
                    best = (v, i, j);
                }
            }
        }
        let (dij, i, j) = best;
        let (ni, nj) = (size[i] as f64, size[j] as f64);
        for k in (0..n).filter(|&k| active[k] && k != i && k != j) {
            let v = linkage.update(d[i * n + k], d[j * n + k], dij, ni, nj, size[k] as f64);
            d[i * n + k] = v;
            d[k * n + i] = v;
        }
        active[j] = false;
        size[i] += size[j];
        let (a, b) = (id[i].min(id[j]), id[i].max(id[j]));
        steps.push(MergeStep {
            left: a,
            right: b,
            height: if sq { dij.max(0.0).sqrt() } else { dij },
            size: size[i],
        });
        id[i] = n + s;
    }
    Ok(MergeTree {
        items: n,
        linkage,
        steps,
    })
}

impl MergeTree {
    pub fn heights(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.height).collect()
    }

    pub fn is_monotone(&self) -> bool {
        self.steps.windows(2).all(|w| w[1].height >= w[0].height)
    }

    /// Labels `1..=k`, numbered in order of first appearance among the items.
    pub fn cut_k(&self, k: usize) -> Result<Vec<usize>> {
        let n = self.items;
        if k == 0 || k > n {
            return Err(Error::domain(format!("k = {k} outside 1..={n}")));
        }
        let mut parent: Vec<usize> = (0..2 * n - 1).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (s, step) in self.steps.iter().take(n - k).enumerate() {
            let a = find(&mut parent, step.left);
            let b = find(&mut parent, step.right);
            parent[a] = n + s;
            parent[b] = n + s;
        }
        let mut label_of = std::collections::HashMap::new();
        Ok((0..n)
            .map(|i| {
                let root = find(&mut parent, i);
                let next = label_of.len() + 1;
                *label_of.entry(root).or_insert(next)
            })
            .collect())
    }

    /// Cut at height `h`: merges with height at most `h` are kept.
    pub fn cut_height(&self, h: f64) -> Result<Vec<usize>> {
        if !self.is_monotone() {
            return Err(Error::domain(format!(
                "cannot cut a {} tree by height: merge heights are not sorted",
                self.linkage
            )));
        }
        let kept = self.steps.iter().filter(|s| s.height <= h).count();
        self.cut_k(self.items - kept)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::distance::{distance_matrix, DistanceMethod};

    fn points_1d(xs: &[f64]) -> (Vec<f64>, usize) {
        let rows: Vec<Vec<f64>> = xs.iter().map(|x| vec![*x]).collect();
        (distance_matrix(&rows, &DistanceMethod::Euclidean), xs.len())
    }

    #[test]
    fn simple_line() {
        let (d, n) = points_1d(&[0.0, 1.0, 5.0, 6.5]);
        let t = hclust(&d, n, Linkage::Single).unwrap();
        let pairs: Vec<_> = t
            .steps
            .iter()
            .map(|s| (s.left, s.right, s.height))
            .collect();
        assert_eq!(pairs, vec![(0, 1, 1.0), (2, 3, 1.5), (4, 5, 4.0)]);
        let t = hclust(&d, n, Linkage::Complete).unwrap();
        assert_eq!(t.steps[2].height, 6.5);
        let t = hclust(&d, n, Linkage::Average).unwrap();
        assert_eq!(t.steps[2].height, (5.0 + 6.5 + 4.0 + 5.5) / 4.0);
        assert_eq!(t.steps[2].size, 4);
    }

    #[test]
    fn ward_and_centroid_use_squared_geometry() {
        let (d, n) = points_1d(&[0.0, 2.0, 10.0]);
        let t = hclust(&d, n, Linkage::Centroid).unwrap();
        // centroid of {0, 2} is 1, so the last merge is at distance 9
        assert!((t.steps[1].height - 9.0).abs() < 1e-12);
        let t = hclust(&d, n, Linkage::WardD2).unwrap();
        // Ward: sqrt(2 * n1 n2 / (n1 + n2)) * centroid distance
        let expected = (2.0 * 2.0 / 3.0f64).sqrt() * 9.0;
        assert!((t.steps[1].height - expected).abs() < 1e-12);
    }

    #[test]
    fn ties_merge_lowest_pair_first() {
        let (d, n) = points_1d(&[0.0, 1.0, 2.0, 3.0]);
        let t = hclust(&d, n, Linkage::Single).unwrap();
        assert_eq!((t.steps[0].left, t.steps[0].right), (0, 1));
        assert_eq!((t.steps[1].left, t.steps[1].right), (2, 4));
        assert_eq!((t.steps[2].left, t.steps[2].right), (3, 5));
    }

    #[test]
    fn cuts() {
        let (d, n) = points_1d(&[5.0, 0.0, 6.0, 1.0, 20.0]);
        let t = hclust(&d, n, Linkage::Complete).unwrap();
        assert_eq!(t.cut_k(1).unwrap(), vec![1; 5]);
        assert_eq!(t.cut_k(3).unwrap(), vec![1, 2, 1, 2, 3]);
        assert_eq!(t.cut_k(5).unwrap(), vec![1, 2, 3, 4, 5]);
        assert_eq!(t.cut_height(1.0).unwrap(), vec![1, 2, 1, 2, 3]);
        assert_eq!(t.cut_height(0.5).unwrap(), vec![1, 2, 3, 4, 5]);
        assert!(t.cut_k(0).is_err());
        assert!(t.cut_k(6).is_err());
    }

    #[test]
    fn non_monotone_tree_refuses_height_cut() {
        // equilateral-ish triangle: centroid linkage produces an inversion
        let rows = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 0.9]];
        let d = distance_matrix(&rows, &DistanceMethod::Euclidean);
        let t = hclust(&d, 3, Linkage::Centroid).unwrap();
        assert!(!t.is_monotone());
        assert!(t.cut_height(0.5).is_err());
        assert!(t.cut_k(2).is_ok());
    }

    #[test]
    fn parse_names() {
        for l in Linkage::ALL {
            assert_eq!(l.to_string().parse::<Linkage>().unwrap(), l);
        }
        assert!("ward.x".parse::<Linkage>().is_err());
        assert!(hclust(&[0.0], 1, Linkage::Single).is_err());
    }
}
