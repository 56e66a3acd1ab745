//! The `mfrac` command line.
//!
//! Exit status: 0 on success, 2 for usage errors (including malformed Hurst expressions),
//! 3 for unreadable or malformed data, 4 for numerical and domain errors.

use std::ffi::OsString;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::api::{self, ClusterMethod, CovarianceMode, Limits, ServerConfig};
use crate::bench::{bench_csv, bench_trunc};
use crate::clustering::{DistanceMethod, Linkage, DEFAULT_ITER_MAX};
use crate::covariance::DEFAULT_COV_TRUNCATION;
use crate::error::Error;
use crate::estimation::{
    estimate_hurst, smooth_estimate, EstimatorParams, GridPolicy, DEFAULT_SPAN,
};
use crate::geom::{Direction, DEFAULT_RESAMPLE};
use crate::io::{
    estimate_to_csv, prices_from_csv, read_text, series_from_csv, series_to_csv, write_text,
};
use crate::plot::{estimate_svg, rsi_svg, series_svg};
use crate::series::TimeSeries;
use crate::sim::{ProcessKind, SimSeed, DEFAULT_TRUNCATION};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_DOMAIN: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "mfrac",
    version,
    about = "Simulate and analyze multifractional processes"
)]
pub struct Cli {
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, env = "MFRAC_THREADS")]
    pub threads: Option<usize>,
    /// More log output (repeat for more).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one realization of a process.
    Simulate(SimulateArgs),
    /// Estimate the Hurst function of a `t,x` series.
    Estimate(EstimateArgs),
    /// Accuracy of the Hurst estimate against the truncation level.
    BenchTrunc(BenchArgs),
    /// Theoretical or empirical covariance matrix.
    Covariance(CovarianceArgs),
    /// Cluster a directory of `t,x` series by their Hurst functions.
    Cluster(ClusterArgs),
    /// Level-set, path and RSI statistics of a series.
    Stats(StatsArgs),
    /// Start the JSON service.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HurstArgs {
    /// Hurst function of `t`, e.g. "0.4 - 0.25*sin(6*pi*t)".
    #[arg(long)]
    pub hurst: Option<String>,
    /// Constant Hurst parameter.
    #[arg(long, conflicts_with = "hurst")]
    pub hurst_const: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EstimatorArgs {
    /// Number of subintervals.
    #[arg(short = 'N', long = "intervals", default_value_t = 100)]
    pub n: usize,
    /// Resolution ratio.
    #[arg(short = 'Q', long = "ratio", default_value_t = 2)]
    pub q: usize,
    /// Increment order.
    #[arg(short = 'L', long = "order", default_value_t = 2)]
    pub l: usize,
    /// LOESS span of the smoothed estimate.
    #[arg(long, default_value_t = DEFAULT_SPAN)]
    pub span: f64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// bm, bbridge, fbm, fbbridge, fgn or ghbmp.
    pub kind: ProcessKind,
    #[command(flatten)]
    pub hurst: HurstArgs,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub start: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub end: f64,
    #[arg(long, default_value_t = 1025)]
    pub points: usize,
    /// Truncation level of the Haar series.
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    pub trunc: u32,
    /// Bridge end value.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub terminal: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Also write an SVG plot of the path.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// CSV file with `t,x` columns.
    pub input: PathBuf,
    #[command(flatten)]
    pub est: EstimatorArgs,
    #[arg(long, value_enum, default_value = "native")]
    pub grid: GridArg,
    /// Report the local fractal dimension `2 - H` in the CSV table.
    #[arg(long)]
    pub lfd: bool,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Also write an SVG of the series and its estimates.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridArg {
    Native,
    Aligned,
}

impl From<GridArg> for GridPolicy {
    fn from(g: GridArg) -> Self {
        match g {
            GridArg::Native => GridPolicy::Native,
            GridArg::Aligned => GridPolicy::Aligned,
        }
    }
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Truncation levels, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "6,8,10,12,14")]
    pub levels: Vec<u32>,
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
    #[arg(long, default_value = "0.4 - 0.25*sin(6*pi*t)")]
    pub hurst: String,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(short = 'N', long = "intervals", default_value_t = 100)]
    pub n: usize,
    #[arg(short = 'Q', long = "ratio", default_value_t = 2)]
    pub q: usize,
    #[arg(short = 'L', long = "order", default_value_t = 2)]
    pub l: usize,
    /// Leave out the timing column, making the output reproducible.
    #[arg(long)]
    pub no_timing: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CovModeArg {
    Theoretical,
    Empirical,
}

#[derive(Debug, Args)]
pub struct CovarianceArgs {
    #[arg(long, value_enum, default_value = "theoretical")]
    pub mode: CovModeArg,
    #[command(flatten)]
    pub hurst: HurstArgs,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    #[arg(long, default_value_t = 0.0)]
    pub start: f64,
    #[arg(long, default_value_t = 1.0)]
    pub end: f64,
    #[arg(long, default_value_t = DEFAULT_COV_TRUNCATION)]
    pub trunc: u32,
    /// Gaussian smoothing bandwidth.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Number of simulated realizations in empirical mode.
    #[arg(short = 'M', long = "realizations", default_value_t = 200)]
    pub m: usize,
    /// Directory of `t,x` CSV files to use instead of simulating (empirical mode).
    #[arg(long)]
    pub input_dir: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Hclust,
    Kmeans,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    /// Directory of `t,x` CSV files, one realization each, taken in file-name order.
    pub dir: PathBuf,
    #[arg(long, value_enum, default_value = "hclust")]
    pub method: MethodArg,
    #[arg(short, long)]
    pub k: Option<usize>,
    /// Cut height (hierarchical clustering without `-k`).
    #[arg(long = "height")]
    pub h: Option<f64>,
    /// euclidean, manhattan, minkowski:p, supremum or canberra.
    #[arg(long, default_value = "euclidean")]
    pub distance: DistanceMethod,
    /// single, complete, average, mcquitty, ward.D, ward.D2, median or centroid.
    #[arg(long, default_value = "complete")]
    pub linkage: Linkage,
    #[arg(long, default_value_t = DEFAULT_ITER_MAX)]
    pub iter_max: usize,
    #[arg(long, default_value_t = 1)]
    pub nstart: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub est: EstimatorArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// CSV file with `t,x` columns, or a single price column with `--rsi`.
    pub input: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub level: Option<f64>,
    #[arg(long, default_value = "greater")]
    pub direction: Direction,
    /// Resampling size of the grid-based statistics.
    #[arg(long, default_value_t = DEFAULT_RESAMPLE)]
    pub resample: usize,
    #[arg(long, requires = "to", allow_negative_numbers = true)]
    pub from: Option<f64>,
    #[arg(long, requires = "from", allow_negative_numbers = true)]
    pub to: Option<f64>,
    /// Relative strength index period.
    #[arg(long, conflicts_with = "level")]
    pub rsi: Option<usize>,
    #[arg(long, default_value_t = 70.0)]
    pub overbought: f64,
    #[arg(long, default_value_t = 30.0)]
    pub oversold: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    #[arg(long, default_value_t = api::DEFAULT_PORT)]
    pub port: u16,
    /// Directory of static assets served at `/`.
    #[arg(long)]
    pub static_dir: Option<PathBuf>,
    #[arg(long, default_value_t = Limits::default().max_points)]
    pub max_points: usize,
}

/// A failed command.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Lib(e) => exit_code(e),
        }
    }
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e.root() {
        Error::Parse { .. } => EXIT_USAGE,
        Error::Data(_) | Error::Io(_) | Error::InsufficientData { .. } | Error::GridMismatch(_) => {
            EXIT_DATA
        }
        _ => EXIT_DOMAIN,
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn emit(out: &OutputArgs, text: &str) -> CmdResult {
    match &out.output {
        Some(path) => write_text(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(Error::from)?;
        }
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("responses serialize to JSON");
    s.push('\n');
    s
}

fn no_svg(cmd: &str) -> Failure {
    usage(format!("`{cmd}` does not produce SVG output"))
}

fn report_seed(given: Option<u64>, used: Option<u64>) {
    if let (None, Some(s)) = (given, used) {
        eprintln!("seed: {s}");
    }
}

fn hurst_text(h: &HurstArgs) -> (Option<f64>, Option<String>) {
    (h.hurst_const, h.hurst.clone())
}

fn cmd_simulate(a: &SimulateArgs) -> CmdResult {
    let (hurst, hurst_expr) = hurst_text(&a.hurst);
    let req = api::SimulateRequest {
        kind: a.kind,
        hurst_expr,
        hurst,
        points: a.points,
        start: a.start,
        end: a.end,
        trunc: Some(a.trunc),
        terminal: a.terminal,
        seed: a.seed,
        timing: false,
    };
    let resp = api::simulate(&req, &Limits::unbounded())?;
    report_seed(a.seed, Some(resp.meta.seed));
    if resp.meta.clamped > 0 {
        log::warn!(
            "{} Hurst values were clamped into (0, 1)",
            resp.meta.clamped
        );
    }
    let series = resp.series()?;
    let title = format!("{} (seed {})", a.kind, resp.meta.seed);
    if let Some(p) = &a.plot {
        write_text(p, &series_svg(&series, &title))?;
    }
    let text = match a.out.format {
        Format::Csv => series_to_csv(&series),
        Format::Json => to_json(&resp),
        Format::Svg => series_svg(&series, &title),
    };
    emit(&a.out, &text)
}

/// Prefix data errors with the file they came from.
fn in_file(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| match e {
        Error::Data(m) => Failure::Lib(Error::Data(format!("{}: {m}", path.display()))),
        other => Failure::Lib(other),
    }
}

fn read_series(path: &Path) -> std::result::Result<TimeSeries, Failure> {
    let text = read_text(path)?;
    series_from_csv(&text).map_err(in_file(path))
}

fn cmd_estimate(a: &EstimateArgs) -> CmdResult {
    let x = read_series(&a.input)?;
    let mut req = api::EstimateRequest::new(x.clone());
    req.n = Some(a.est.n);
    req.q = Some(a.est.q);
    req.l = Some(a.est.l);
    req.span = a.est.span;
    req.grid = a.grid.into();
    let needs_estimate = a.out.format != Format::Json || a.plot.is_some();
    let est = if needs_estimate {
        let params = req.params();
        let mut est = estimate_hurst(&x, &params)?;
        smooth_estimate(&mut est, a.est.span)?;
        if est.any_degenerate() {
            log::warn!("some subintervals have degenerate variations");
        }
        Some(est)
    } else {
        None
    };
    if let (Some(p), Some(est)) = (&a.plot, &est) {
        write_text(p, &estimate_svg(&x, est))?;
    }
    let text = match a.out.format {
        Format::Json => to_json(&api::estimate(&req, &Limits::unbounded())?),
        Format::Csv => {
            let est = est.expect("computed for CSV");
            estimate_to_csv(&if a.lfd { est.to_lfd() } else { est })
        }
        Format::Svg => estimate_svg(&x, &est.expect("computed for SVG")),
    };
    emit(&a.out, &text)
}

fn cmd_bench(a: &BenchArgs) -> CmdResult {
    let spec = api::hurst_spec(None, Some(&a.hurst))?;
    let params = EstimatorParams {
        n: a.n,
        q: a.q,
        l: a.l,
        grid: GridPolicy::Native,
    };
    params.validate()?;
    let seed = a.seed.unwrap_or_else(rand::random);
    report_seed(a.seed, Some(seed));
    let rows = bench_trunc(&a.levels, a.reps, &spec, SimSeed(seed), &params)?;
    let text = match a.out.format {
        Format::Csv => bench_csv(&rows, !a.no_timing),
        Format::Json => {
            let rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    let mut v = serde_json::to_value(r).expect("rows serialize");
                    if a.no_timing {
                        v.as_object_mut().map(|o| o.remove("mean_elapsed_s"));
                    }
                    v
                })
                .collect();
            to_json(
                &serde_json::json!({ "seed": seed, "reps": a.reps, "hurst": a.hurst, "rows": rows }),
            )
        }
        Format::Svg => return Err(no_svg("bench-trunc")),
    };
    emit(&a.out, &text)
}

/// `t,x` CSV files of a directory in file-name order.
fn read_dir_series(dir: &Path) -> std::result::Result<(Vec<String>, Vec<TimeSeries>), Failure> {
    let entries =
        std::fs::read_dir(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("csv")))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Failure::Lib(Error::Data(format!(
            "no .csv files in {}",
            dir.display()
        ))));
    }
    let names = paths
        .iter()
        .map(|p| {
            p.file_name()
                .map_or_else(String::new, |n| n.to_string_lossy().into_owned())
        })
        .collect();
    let series = paths
        .iter()
        .map(|p| read_series(p))
        .collect::<std::result::Result<_, _>>()?;
    Ok((names, series))
}

fn cmd_covariance(a: &CovarianceArgs) -> CmdResult {
    let mode = match a.mode {
        CovModeArg::Theoretical => CovarianceMode::Theoretical,
        CovModeArg::Empirical => CovarianceMode::Empirical,
    };
    let mut req = api::CovarianceRequest::new(mode);
    if let Some(dir) = &a.input_dir {
        if mode != CovarianceMode::Empirical {
            return Err(usage("--input-dir requires --mode empirical"));
        }
        req.realizations = Some(read_dir_series(dir)?.1);
    } else {
        (req.hurst, req.hurst_expr) = hurst_text(&a.hurst);
        req.points = a.points;
        req.start = a.start;
        req.end = a.end;
        req.trunc = Some(a.trunc);
        req.m = a.m;
        req.seed = a.seed;
    }
    req.theta = a.theta;
    let resp = api::covariance(&req, &Limits::unbounded())?;
    report_seed(a.seed, resp.meta.seed);
    let text = match a.out.format {
        Format::Csv => resp.matrix.to_csv(),
        Format::Json => to_json(&resp),
        Format::Svg => return Err(no_svg("covariance")),
    };
    emit(&a.out, &text)
}

fn cmd_cluster(a: &ClusterArgs) -> CmdResult {
    let method = match a.method {
        MethodArg::Hclust => ClusterMethod::Hclust,
        MethodArg::Kmeans => ClusterMethod::Kmeans,
    };
    if method == ClusterMethod::Hclust && a.k.is_none() && a.h.is_none() {
        return Err(usage("hierarchical clustering needs -k or --height"));
    }
    if method == ClusterMethod::Kmeans && a.k.is_none() {
        return Err(usage("k-means needs -k"));
    }
    let (names, xs) = read_dir_series(&a.dir)?;
    let mut req = api::ClusterRequest::new(method);
    req.realizations = Some(xs);
    req.k = a.k;
    req.h = a.h;
    req.distance = a.distance;
    req.linkage = a.linkage;
    req.iter_max = Some(a.iter_max);
    req.nstart = Some(a.nstart);
    req.seed = a.seed;
    req.n = Some(a.est.n);
    req.q = Some(a.est.q);
    req.l = Some(a.est.l);
    req.span = a.est.span;
    let resp = api::cluster(&req, &Limits::unbounded())?;
    report_seed(a.seed, resp.meta.seed);
    let text = match a.out.format {
        Format::Csv => {
            let mut out = String::from("file,cluster,distance_from_center\n");
            for ((name, c), d) in names
                .iter()
                .zip(&resp.result.cluster)
                .zip(&resp.result.cluster_info)
            {
                out.push_str(&format!("{name},{c},{d}\n"));
            }
            out
        }
        Format::Json => to_json(&resp),
        Format::Svg => return Err(no_svg("cluster")),
    };
    emit(&a.out, &text)
}

fn cmd_stats(a: &StatsArgs) -> CmdResult {
    let text = read_text(&a.input)?;
    let path_err = in_file(&a.input);
    if let Some(period) = a.rsi {
        let prices = prices_from_csv(&text).map_err(path_err)?;
        let mut req = api::StatsRequest::new(TimeSeries::new(vec![0.0, 1.0], vec![0.0, 0.0])?);
        req.series = None;
        req.prices = Some(prices.clone());
        req.rsi_period = Some(period);
        let resp = api::stats(&req, &Limits::unbounded())?;
        let values = resp.rsi.as_ref().expect("requested").values.clone();
        let out = match a.out.format {
            Format::Csv => {
                let mut out = String::from("index,price,rsi\n");
                for (i, (p, r)) in prices.iter().zip(&values).enumerate() {
                    match r {
                        Some(r) => out.push_str(&format!("{i},{p},{r}\n")),
                        None => out.push_str(&format!("{i},{p},\n")),
                    }
                }
                out
            }
            Format::Json => to_json(&resp),
            Format::Svg => rsi_svg(&prices, &values, a.overbought, a.oversold),
        };
        return emit(&a.out, &out);
    }
    let x = series_from_csv(&text).map_err(path_err)?;
    let mut req = api::StatsRequest::new(x.clone());
    req.level = a.level;
    req.direction = a.direction;
    req.n = Some(a.resample);
    req.sub_interval = a.from.zip(a.to);
    let resp = api::stats(&req, &Limits::unbounded())?;
    let out = match a.out.format {
        Format::Csv => {
            let mut out = String::from("statistic,value\n");
            let mut row = |k: &str, v: String| out.push_str(&format!("{k},{v}\n"));
            if let Some(p) = &resp.path {
                row("points", p.points.to_string());
                row("max", p.max.value.to_string());
                row("argmax", p.max.time.to_string());
                row("min", p.min.value.to_string());
                row("argmin", p.min.time.to_string());
                row("cross_mean", p.cross_mean.to_string());
            }
            if let Some(l) = &resp.level {
                row("level", l.query.level.to_string());
                row("sojourn", l.sojourn.to_string());
                row("exc_area", l.exc_area.to_string());
                row("cross_count", l.cross_count.to_string());
                row("cross_rate", l.cross_rate.to_string());
                row("longest_streak", l.streaks.longest.to_string());
                row("mean_streak", l.streaks.mean.to_string());
                row("streak_count", l.streaks.count.to_string());
            }
            out
        }
        Format::Json => to_json(&resp),
        Format::Svg => series_svg(&x, &a.input.display().to_string()),
    };
    emit(&a.out, &out)
}

fn cmd_serve(a: &ServeArgs) -> CmdResult {
    let addr: SocketAddr = format!("{}:{}", a.host, a.port)
        .parse()
        .map_err(|e| usage(format!("invalid address {}:{}: {e}", a.host, a.port)))?;
    let cfg = ServerConfig {
        limits: Limits {
            max_points: a.max_points,
            ..Limits::default()
        },
        static_dir: a.static_dir.clone(),
    };
    let rt = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(Error::from)?;
    eprintln!("serving on http://{addr}");
    rt.block_on(api::serve(addr, cfg))?;
    Ok(())
}

fn dispatch(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Estimate(a) => cmd_estimate(a),
        Command::BenchTrunc(a) => cmd_bench(a),
        Command::Covariance(a) => cmd_covariance(a),
        Command::Cluster(a) => cmd_cluster(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Serve(a) => cmd_serve(a),
    }
}

/// Print an error, pointing at the offending byte of an expression when possible.
fn report(cli: &Cli, f: &Failure) {
    match f {
        Failure::Usage(m) => eprintln!("error: {m}"),
        Failure::Lib(e) => {
            eprintln!("error: {e}");
            if let Error::Parse { offset, .. } = e.root() {
                let expr = match &cli.command {
                    Command::Simulate(a) => a.hurst.hurst.as_deref(),
                    Command::Covariance(a) => a.hurst.hurst.as_deref(),
                    Command::BenchTrunc(a) => Some(a.hurst.as_str()),
                    _ => None,
                };
                if let Some(src) = expr {
                    let col = src.get(..*offset).map_or(*offset, |s| s.chars().count());
                    eprintln!("  {src}\n  {}^", " ".repeat(col));
                }
            }
        }
    }
}

/// Parse arguments, run the command and return the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .try_init();
    let result = match cli.threads {
        Some(0) => Err(usage("--threads must be at least 1")),
        Some(n) if matches!(cli.command, Command::Serve(_)) => {
            if rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .is_err()
            {
                log::warn!("thread pool already initialized; --threads ignored");
            }
            dispatch(&cli)
        }
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Failure::Lib(Error::Resource(format!("thread pool: {e}")))),
        },
        None => dispatch(&cli),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            report(&cli, &f);
            f.exit_code()
        }
    }
}
