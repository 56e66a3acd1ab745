//! Request and response bodies of the JSON service, and the pure functions behind each endpoint.
//!
//! The command line builds the same requests, so its JSON output has the same shape.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering::{
    adjusted_rand_index, hclust_hurst, kmeans_hurst, ClusterResult, DistanceMethod, HclustOptions,
    KmeansOptions, Linkage, DEFAULT_ITER_MAX,
};
use crate::covariance::{cov_ghbmp, est_cov, CovMatrix, DEFAULT_COV_TRUNCATION};
use crate::error::{Error, Result};
use crate::estimation::{
    estimate_hurst, smooth_estimate, EstimatorParams, GridPolicy, DEFAULT_SPAN,
};
use crate::expr::parse_hurst_expr;
use crate::geom::{
    cross_count, cross_mean, cross_rate, exc_area, extremum, rs_index, sojourn, streak_stats,
    Direction, Extreme, Extremum, LevelQuery, Streaks, DEFAULT_RESAMPLE,
};
use crate::io::series_from_csv;
use crate::series::{GridSpec, TimeSeries};
use crate::sim::{
    simulate_ghbmp, simulate_process, HurstSpec, ProcessConfig, ProcessHurst, ProcessKind, SimSeed,
    DEFAULT_TRUNCATION,
};

/// Size limits applied to incoming requests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest number of points in any single series.
    pub max_points: usize,
    /// Largest grid of a covariance matrix.
    pub max_matrix_points: usize,
    /// Largest number of realizations in one request.
    pub max_realizations: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_points: (1 << 17) + 1,
            max_matrix_points: 4097,
            max_realizations: 1000,
        }
    }
}

impl Limits {
    /// No limits beyond those of the numerical routines.
    pub fn unbounded() -> Self {
        Limits {
            max_points: usize::MAX,
            max_matrix_points: usize::MAX,
            max_realizations: usize::MAX,
        }
    }

    fn points(&self, what: &str, n: usize) -> Result<()> {
        if n > self.max_points {
            return Err(Error::Resource(format!(
                "{what} has {n} points, the limit is {}",
                self.max_points
            )));
        }
        Ok(())
    }

    fn realizations(&self, n: usize) -> Result<()> {
        if n > self.max_realizations {
            return Err(Error::Resource(format!(
                "{n} realizations requested, the limit is {}",
                self.max_realizations
            )));
        }
        Ok(())
    }
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(rand::random)
}

fn elapsed_ms(start: Instant, timing: bool) -> Option<f64> {
    timing.then(|| start.elapsed().as_secs_f64() * 1e3)
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Data(format!("`{name}` must be finite")))
    }
}

/// Hurst function from either a number or an expression in `t`.
pub fn hurst_spec(hurst: Option<f64>, hurst_expr: Option<&str>) -> Result<HurstSpec> {
    match (hurst, hurst_expr) {
        (Some(_), Some(_)) => Err(Error::Data(
            "give either `hurst` or `hurst_expr`, not both".into(),
        )),
        (Some(h), None) => {
            constant_hurst(h)?;
            Ok(HurstSpec::constant(h))
        }
        (None, Some(src)) => {
            let e = parse_hurst_expr(src)?;
            e.validate(1025)?;
            Ok(e.to_hurst_spec())
        }
        (None, None) => Err(Error::Data("a Hurst function is required".into())),
    }
}

fn constant_hurst(h: f64) -> Result<f64> {
    if h > 0.0 && h < 1.0 {
        Ok(h)
    } else {
        Err(Error::domain(format!("Hurst parameter {h} outside (0, 1)")))
    }
}

fn process_hurst(
    kind: ProcessKind,
    hurst: Option<f64>,
    hurst_expr: Option<&str>,
) -> Result<ProcessHurst> {
    match kind {
        ProcessKind::Bm | ProcessKind::Bbridge => {
            if hurst.is_some() || hurst_expr.is_some() {
                return Err(Error::Data(format!("{kind} takes no Hurst parameter")));
            }
            Ok(ProcessHurst::None)
        }
        ProcessKind::Ghbmp => Ok(ProcessHurst::Function(hurst_spec(hurst, hurst_expr)?)),
        _ => {
            let h = match (hurst, hurst_expr) {
                (Some(_), Some(_)) => {
                    return Err(Error::Data(
                        "give either `hurst` or `hurst_expr`, not both".into(),
                    ))
                }
                (Some(h), None) => h,
                (None, Some(src)) => parse_hurst_expr(src)?.constant_value().ok_or_else(|| {
                    Error::domain(format!(
                        "{kind} needs a constant Hurst parameter, got `{src}`"
                    ))
                })?,
                (None, None) => return Err(Error::Data(format!("{kind} needs a Hurst parameter"))),
            };
            Ok(ProcessHurst::Constant(constant_hurst(h)?))
        }
    }
}

fn default_points() -> usize {
    1025
}

fn default_end() -> f64 {
    1.0
}

fn default_kind() -> ProcessKind {
    ProcessKind::Ghbmp
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateRequest {
    #[serde(default = "default_kind")]
    pub kind: ProcessKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hurst_expr: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hurst: Option<f64>,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default)]
    pub start: f64,
    #[serde(default = "default_end")]
    pub end: f64,
    #[serde(
        rename = "trunc_J",
        alias = "J",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub trunc: Option<u32>,
    #[serde(default)]
    pub terminal: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub timing: bool,
}

impl SimulateRequest {
    pub fn new(kind: ProcessKind) -> Self {
        SimulateRequest {
            kind,
            hurst_expr: None,
            hurst: None,
            points: default_points(),
            start: 0.0,
            end: 1.0,
            trunc: None,
            terminal: 0.0,
            seed: None,
            timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateMeta {
    pub kind: ProcessKind,
    pub seed: u64,
    #[serde(rename = "J", skip_serializing_if = "Option::is_none")]
    pub trunc: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hurst: Option<String>,
    pub points: usize,
    /// Hurst values clamped into (0, 1) during simulation.
    pub clamped: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateResponse {
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub meta: SimulateMeta,
}

impl SimulateResponse {
    pub fn series(&self) -> Result<TimeSeries> {
        TimeSeries::new(self.t.clone(), self.x.clone())
    }
}

/// `POST /api/simulate`. For `fgn`, `t` holds the sample index.
pub fn simulate(req: &SimulateRequest, limits: &Limits) -> Result<SimulateResponse> {
    let clock = Instant::now();
    limits.points("simulation", req.points)?;
    let hurst = process_hurst(req.kind, req.hurst, req.hurst_expr.as_deref())?;
    let trunc = (req.kind == ProcessKind::Ghbmp).then(|| req.trunc.unwrap_or(DEFAULT_TRUNCATION));
    let seed = resolve_seed(req.seed);
    let cfg = ProcessConfig {
        kind: req.kind,
        grid: GridSpec::uniform(
            finite("start", req.start)?,
            finite("end", req.end)?,
            req.points,
        ),
        hurst,
        trunc: trunc.unwrap_or(DEFAULT_TRUNCATION),
        terminal: finite("terminal", req.terminal)?,
        seed: SimSeed(seed),
    };
    let sim = simulate_process(&cfg)?;
    let hurst_label = match (&req.hurst_expr, req.hurst) {
        (Some(s), _) => Some(s.clone()),
        (None, Some(h)) => Some(h.to_string()),
        _ => None,
    };
    let (t, x) = sim.series.into_parts();
    Ok(SimulateResponse {
        meta: SimulateMeta {
            kind: req.kind,
            seed,
            trunc,
            hurst: hurst_label,
            points: t.len(),
            clamped: sim.clamped,
            elapsed_ms: elapsed_ms(clock, req.timing),
        },
        t,
        x,
    })
}

/// The series to analyze: exactly one of the three inputs must be set.
fn resolve_series(
    series: &Option<TimeSeries>,
    csv: &Option<String>,
    sim: &Option<SimulateRequest>,
    limits: &Limits,
) -> Result<(TimeSeries, Option<u64>)> {
    let given = [series.is_some(), csv.is_some(), sim.is_some()];
    if given.iter().filter(|g| **g).count() != 1 {
        return Err(Error::Data(
            "exactly one of `series`, `csv` or `simulate` is required".into(),
        ));
    }
    if let Some(s) = series {
        limits.points("series", s.len())?;
        return Ok((s.clone(), None));
    }
    if let Some(text) = csv {
        let s = series_from_csv(text)?;
        limits.points("series", s.len())?;
        return Ok((s, None));
    }
    let resp = simulate(sim.as_ref().expect("checked above"), limits)?;
    Ok((resp.series()?, Some(resp.meta.seed)))
}

fn default_span() -> f64 {
    DEFAULT_SPAN
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateRequest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<TimeSeries>,
    /// CSV text with a `t,x` layout.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulate: Option<SimulateRequest>,
    #[serde(
        rename = "N",
        alias = "n",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub n: Option<usize>,
    #[serde(
        rename = "Q",
        alias = "q",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub q: Option<usize>,
    #[serde(
        rename = "L",
        alias = "l",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub l: Option<usize>,
    #[serde(default = "default_span")]
    pub span: f64,
    #[serde(default)]
    pub grid: GridPolicy,
    #[serde(default)]
    pub timing: bool,
}

impl EstimateRequest {
    pub fn new(series: TimeSeries) -> Self {
        EstimateRequest {
            series: Some(series),
            csv: None,
            simulate: None,
            n: None,
            q: None,
            l: None,
            span: DEFAULT_SPAN,
            grid: GridPolicy::Native,
            timing: false,
        }
    }

    pub fn params(&self) -> EstimatorParams {
        let d = EstimatorParams::default();
        EstimatorParams {
            n: self.n.unwrap_or(d.n),
            q: self.q.unwrap_or(d.q),
            l: self.l.unwrap_or(d.l),
            grid: self.grid,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateDiagnostics {
    pub points: usize,
    pub degenerate: bool,
    pub degenerate_count: usize,
    /// Subintervals without samples that borrowed a neighbor's variation.
    pub merged: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateMeta {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateResponse {
    pub interval_starts: Vec<f64>,
    pub raw: Vec<f64>,
    pub smoothed: Vec<f64>,
    pub lfd_raw: Vec<f64>,
    pub lfd_smoothed: Vec<f64>,
    pub degenerate: Vec<bool>,
    pub params: EstimatorParams,
    pub span: f64,
    pub diagnostics: EstimateDiagnostics,
    /// The analyzed series, echoed when it was simulated by the request.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<TimeSeries>,
    pub meta: EstimateMeta,
}

/// `POST /api/estimate`.
pub fn estimate(req: &EstimateRequest, limits: &Limits) -> Result<EstimateResponse> {
    let clock = Instant::now();
    let (x, seed) = resolve_series(&req.series, &req.csv, &req.simulate, limits)?;
    let params = req.params();
    let mut est = estimate_hurst(&x, &params)?;
    smooth_estimate(&mut est, req.span)?;
    let lfd = est.to_lfd();
    let degenerate_count = est.degenerate.iter().filter(|d| **d).count();
    Ok(EstimateResponse {
        diagnostics: EstimateDiagnostics {
            points: x.len(),
            degenerate: degenerate_count > 0,
            degenerate_count,
            merged: est.merged.clone(),
        },
        interval_starts: est.interval_starts,
        raw: est.raw,
        smoothed: est.smoothed.unwrap_or_default(),
        lfd_raw: lfd.raw,
        lfd_smoothed: lfd.smoothed.unwrap_or_default(),
        degenerate: est.degenerate,
        params,
        span: req.span,
        series: seed.map(|_| x),
        meta: EstimateMeta {
            seed,
            elapsed_ms: elapsed_ms(clock, req.timing),
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CovarianceMode {
    #[default]
    Theoretical,
    Empirical,
}

fn default_cov_points() -> usize {
    101
}

fn default_m() -> usize {
    200
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovarianceRequest {
    #[serde(default)]
    pub mode: CovarianceMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hurst_expr: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hurst: Option<f64>,
    #[serde(default = "default_cov_points")]
    pub points: usize,
    #[serde(default)]
    pub start: f64,
    #[serde(default = "default_end")]
    pub end: f64,
    #[serde(
        rename = "trunc_J",
        alias = "J",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub trunc: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    /// Realizations for the empirical mode; simulated from the Hurst function when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realizations: Option<Vec<TimeSeries>>,
    #[serde(rename = "M", alias = "m", default = "default_m")]
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub timing: bool,
}

impl CovarianceRequest {
    pub fn new(mode: CovarianceMode) -> Self {
        CovarianceRequest {
            mode,
            hurst_expr: None,
            hurst: None,
            points: default_cov_points(),
            start: 0.0,
            end: 1.0,
            trunc: None,
            theta: None,
            realizations: None,
            m: default_m(),
            seed: None,
            timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceMeta {
    pub mode: CovarianceMode,
    #[serde(rename = "J", skip_serializing_if = "Option::is_none")]
    pub trunc: Option<u32>,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceResponse {
    #[serde(flatten)]
    pub matrix: CovMatrix,
    pub meta: CovarianceMeta,
}

/// Seeds of a simulated batch: realization `i` uses `SimSeed(seed).child(i)`.
pub fn batch_seed(seed: u64, index: usize) -> SimSeed {
    SimSeed(seed).child(index as u64)
}

/// `POST /api/covariance`.
pub fn covariance(req: &CovarianceRequest, limits: &Limits) -> Result<CovarianceResponse> {
    let clock = Instant::now();
    if let Some(th) = req.theta {
        finite("theta", th)?;
    }
    let grid_points = |n: usize| -> Result<()> {
        if n > limits.max_matrix_points {
            return Err(Error::Resource(format!(
                "covariance grid has {n} points, the limit is {}",
                limits.max_matrix_points
            )));
        }
        Ok(())
    };
    match req.mode {
        CovarianceMode::Theoretical => {
            grid_points(req.points)?;
            let spec = hurst_spec(req.hurst, req.hurst_expr.as_deref())?;
            let trunc = req.trunc.unwrap_or(DEFAULT_COV_TRUNCATION);
            let grid = GridSpec::uniform(req.start, req.end, req.points).times()?;
            let matrix = cov_ghbmp(&grid, &spec, trunc, req.theta)?;
            Ok(CovarianceResponse {
                matrix,
                meta: CovarianceMeta {
                    mode: req.mode,
                    trunc: Some(trunc),
                    m: None,
                    theta: req.theta,
                    seed: None,
                    elapsed_ms: elapsed_ms(clock, req.timing),
                },
            })
        }
        CovarianceMode::Empirical => {
            let (matrix, trunc, seed, m) = match &req.realizations {
                Some(xs) => {
                    limits.realizations(xs.len())?;
                    if let Some(x) = xs.first() {
                        grid_points(x.len())?;
                    }
                    if req.hurst.is_some() || req.hurst_expr.is_some() || req.seed.is_some() {
                        return Err(Error::Data(
                            "`realizations` cannot be combined with simulation fields".into(),
                        ));
                    }
                    (est_cov(xs, req.theta)?, None, None, xs.len())
                }
                None => {
                    grid_points(req.points)?;
                    limits.realizations(req.m)?;
                    let spec = hurst_spec(req.hurst, req.hurst_expr.as_deref())?;
                    let trunc = req.trunc.unwrap_or(DEFAULT_COV_TRUNCATION);
                    let seed = resolve_seed(req.seed);
                    let grid = GridSpec::uniform(req.start, req.end, req.points);
                    let xs = (0..req.m)
                        .into_par_iter()
                        .map(|i| simulate_ghbmp(&grid, &spec, trunc, batch_seed(seed, i)))
                        .collect::<Result<Vec<_>>>()?;
                    (est_cov(&xs, req.theta)?, Some(trunc), Some(seed), req.m)
                }
            };
            Ok(CovarianceResponse {
                matrix,
                meta: CovarianceMeta {
                    mode: req.mode,
                    trunc,
                    m: Some(m),
                    theta: req.theta,
                    seed,
                    elapsed_ms: elapsed_ms(clock, req.timing),
                },
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClusterMethod {
    #[default]
    Hclust,
    Kmeans,
}

fn default_per_family() -> usize {
    5
}

fn default_cluster_points() -> usize {
    2049
}

/// Simulated input for clustering: `per_family` realizations of each Hurst expression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub families: Vec<String>,
    #[serde(default = "default_per_family")]
    pub per_family: usize,
    #[serde(default = "default_cluster_points")]
    pub points: usize,
    #[serde(
        rename = "trunc_J",
        alias = "J",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub trunc: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterRequest {
    #[serde(default)]
    pub method: ClusterMethod,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realizations: Option<Vec<TimeSeries>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulate: Option<FamilySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(default)]
    pub distance: DistanceMethod,
    #[serde(default)]
    pub linkage: Linkage,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iter_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nstart: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(
        rename = "N",
        alias = "n",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub n: Option<usize>,
    #[serde(
        rename = "Q",
        alias = "q",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub q: Option<usize>,
    #[serde(
        rename = "L",
        alias = "l",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub l: Option<usize>,
    #[serde(default = "default_span")]
    pub span: f64,
    #[serde(default)]
    pub timing: bool,
}

impl ClusterRequest {
    pub fn new(method: ClusterMethod) -> Self {
        ClusterRequest {
            method,
            realizations: None,
            simulate: None,
            k: None,
            h: None,
            distance: DistanceMethod::Euclidean,
            linkage: Linkage::Complete,
            iter_max: None,
            nstart: None,
            seed: None,
            n: None,
            q: None,
            l: None,
            span: DEFAULT_SPAN,
            timing: false,
        }
    }

    pub fn params(&self) -> EstimatorParams {
        let d = EstimatorParams::default();
        EstimatorParams {
            n: self.n.unwrap_or(d.n),
            q: self.q.unwrap_or(d.q),
            l: self.l.unwrap_or(d.l),
            grid: d.grid,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterMeta {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterResponse {
    #[serde(flatten)]
    pub result: ClusterResult,
    /// Family index (1-based) of each simulated realization.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truth: Option<Vec<usize>>,
    /// Adjusted Rand index of the clustering against `truth`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ari: Option<f64>,
    pub meta: ClusterMeta,
}

/// Simulate `per_family` realizations of each Hurst function on a uniform grid of [0, 1].
/// Realization `i` (families in order) uses [`batch_seed`]`(seed, i)`.
pub fn simulate_families(
    families: &[HurstSpec],
    per_family: usize,
    points: usize,
    trunc: u32,
    seed: u64,
) -> Result<(Vec<TimeSeries>, Vec<usize>)> {
    let grid = GridSpec::uniform(0.0, 1.0, points);
    let total = families.len() * per_family;
    let xs = (0..total)
        .into_par_iter()
        .map(|i| simulate_ghbmp(&grid, &families[i / per_family], trunc, batch_seed(seed, i)))
        .collect::<Result<Vec<_>>>()?;
    let truth = (0..total).map(|i| i / per_family + 1).collect();
    Ok((xs, truth))
}

/// `POST /api/cluster`.
pub fn cluster(req: &ClusterRequest, limits: &Limits) -> Result<ClusterResponse> {
    let clock = Instant::now();
    let mut seed = req.seed;
    let (xs, truth) = match (&req.realizations, &req.simulate) {
        (Some(xs), None) => {
            limits.realizations(xs.len())?;
            for x in xs {
                limits.points("realization", x.len())?;
            }
            (xs.clone(), None)
        }
        (None, Some(fam)) => {
            limits.realizations(fam.families.len() * fam.per_family)?;
            limits.points("realization", fam.points)?;
            let specs = fam
                .families
                .iter()
                .enumerate()
                .map(|(i, src)| {
                    hurst_spec(None, Some(src)).map_err(|e| Error::Item {
                        index: i,
                        source: Box::new(e),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let s = *seed.get_or_insert_with(rand::random);
            let (xs, truth) = simulate_families(
                &specs,
                fam.per_family,
                fam.points,
                fam.trunc.unwrap_or(DEFAULT_TRUNCATION),
                s,
            )?;
            (xs, Some(truth))
        }
        _ => {
            return Err(Error::Data(
                "exactly one of `realizations` or `simulate` is required".into(),
            ))
        }
    };
    let params = req.params();
    let result = match req.method {
        ClusterMethod::Hclust => {
            let opts = HclustOptions {
                k: req.k,
                h: req.h,
                distance: req.distance,
                linkage: req.linkage,
                params,
                span: req.span,
            };
            hclust_hurst(&xs, &opts)?
        }
        ClusterMethod::Kmeans => {
            let k = req
                .k
                .ok_or_else(|| Error::Data("k-means needs `k`".into()))?;
            let s = *seed.get_or_insert_with(rand::random);
            let opts = KmeansOptions {
                k,
                iter_max: req.iter_max.unwrap_or(DEFAULT_ITER_MAX),
                nstart: req.nstart.unwrap_or(1),
                seed: SimSeed(s),
                params,
                span: req.span,
            };
            kmeans_hurst(&xs, &opts)?
        }
    };
    let ari = match &truth {
        Some(t) => Some(adjusted_rand_index(t, &result.cluster)?),
        None => None,
    };
    Ok(ClusterResponse {
        result,
        truth,
        ari,
        meta: ClusterMeta {
            seed,
            elapsed_ms: elapsed_ms(clock, req.timing),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatsRequest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<TimeSeries>,
    /// CSV text with a `t,x` layout.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulate: Option<SimulateRequest>,
    /// Level for sojourn, excursion area, crossings and streaks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<f64>,
    #[serde(default)]
    pub direction: Direction,
    /// Resampling size of the grid-based statistics.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sub_interval: Option<(f64, f64)>,
    /// Prices for the relative strength index; the series values are used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prices: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rsi_period: Option<usize>,
    #[serde(default)]
    pub timing: bool,
}

impl StatsRequest {
    pub fn new(series: TimeSeries) -> Self {
        StatsRequest {
            series: Some(series),
            csv: None,
            simulate: None,
            level: None,
            direction: Direction::Greater,
            n: None,
            sub_interval: None,
            prices: None,
            rsi_period: None,
            timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathStats {
    pub points: usize,
    pub max: Extremum,
    pub min: Extremum,
    pub cross_mean: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelStats {
    pub query: LevelQuery,
    pub sojourn: f64,
    pub exc_area: f64,
    pub cross_count: usize,
    pub cross_rate: f64,
    pub streaks: Streaks,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RsiStats {
    pub period: usize,
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsResponse {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<LevelStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rsi: Option<RsiStats>,
    pub meta: EstimateMeta,
}

/// `POST /api/stats`. Path statistics need a series; the RSI needs `rsi_period`.
pub fn stats(req: &StatsRequest, limits: &Limits) -> Result<StatsResponse> {
    let clock = Instant::now();
    let has_series = req.series.is_some() || req.csv.is_some() || req.simulate.is_some();
    let (series, seed) = if has_series {
        let (x, s) = resolve_series(&req.series, &req.csv, &req.simulate, limits)?;
        (Some(x), s)
    } else {
        (None, None)
    };
    if series.is_none() && req.prices.is_none() {
        return Err(Error::Data(
            "a series (`series`, `csv` or `simulate`) or `prices` is required".into(),
        ));
    }
    if req.level.is_some() && series.is_none() {
        return Err(Error::Data("level statistics need a series".into()));
    }
    let path = series.as_ref().map(|x| PathStats {
        points: x.len(),
        max: extremum(x, Extreme::Max),
        min: extremum(x, Extreme::Min),
        cross_mean: cross_mean(x),
    });
    let level = match (&series, req.level) {
        (Some(x), Some(a)) => {
            let a = finite("level", a)?;
            let mut q =
                LevelQuery::new(a, req.direction).with_resample(req.n.unwrap_or(DEFAULT_RESAMPLE));
            if let Some((lo, hi)) = req.sub_interval {
                q = q.with_sub_interval(lo, hi);
            }
            Some(LevelStats {
                query: q,
                sojourn: sojourn(x, &q)?,
                exc_area: exc_area(x, &q)?,
                cross_count: cross_count(x, a),
                cross_rate: cross_rate(x, a),
                streaks: streak_stats(x, &q)?,
            })
        }
        _ => None,
    };
    let rsi = match req.rsi_period {
        Some(period) => {
            let prices = match (&req.prices, &series) {
                (Some(p), _) => {
                    limits.points("prices", p.len())?;
                    p.clone()
                }
                (None, Some(x)) => x.values().to_vec(),
                (None, None) => unreachable!("checked above"),
            };
            Some(RsiStats {
                period,
                values: rs_index(&prices, period)?,
            })
        }
        None if req.prices.is_some() => {
            return Err(Error::Data("`prices` needs `rsi_period`".into()))
        }
        None => None,
    };
    Ok(StatsResponse {
        path,
        level,
        rsi,
        meta: EstimateMeta {
            seed,
            elapsed_ms: elapsed_ms(clock, req.timing),
        },
    })
}
