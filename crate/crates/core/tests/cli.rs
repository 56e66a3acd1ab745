use std::path::Path;
use std::process::{Command, Output};

fn mfrac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfrac"))
        .args(args)
        .env_remove("MFRAC_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(
        o.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn ghbmp_csv_has_all_rows_and_starts_at_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.csv");
    let o = mfrac(&[
        "simulate",
        "ghbmp",
        "--hurst",
        "0.3",
        "--points",
        "16385",
        "--trunc",
        "14",
        "--seed",
        "7",
        "--format",
        "csv",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,x");
    assert_eq!(lines.len(), 16386);
    assert_eq!(lines[1], "0,0");
}

#[test]
fn fbbridge_ends_at_terminal() {
    let text = stdout(&mfrac(&[
        "simulate",
        "fbbridge",
        "--hurst-const",
        "0.6",
        "--end",
        "1",
        "--terminal",
        "2",
        "--points",
        "1001",
        "--seed",
        "1",
    ]));
    assert_eq!(text.lines().last().unwrap(), "1,2");
}

#[test]
fn same_seed_gives_identical_output() {
    let args = [
        "simulate",
        "ghbmp",
        "--hurst",
        "0.8 - 0.55*t",
        "--points",
        "2049",
        "--trunc",
        "11",
        "--seed",
        "3",
    ];
    assert_eq!(stdout(&mfrac(&args)), stdout(&mfrac(&args)));
    let args = [
        "simulate", "fgn", "--hurst", "0.3", "--points", "500", "--seed", "3", "--format", "json",
    ];
    assert_eq!(stdout(&mfrac(&args)), stdout(&mfrac(&args)));
}

#[test]
fn csv_round_trips_every_bit() {
    let text = stdout(&mfrac(&[
        "simulate",
        "fbm",
        "--hurst-const",
        "0.35",
        "--points",
        "300",
        "--seed",
        "8",
    ]));
    let x = mfrac::io::series_from_csv(&text).unwrap();
    assert_eq!(mfrac::io::series_to_csv(&x), text);
}

#[test]
fn svg_output_and_plot_flag() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("p.svg");
    let svg = stdout(&mfrac(&[
        "simulate",
        "bm",
        "--points",
        "100",
        "--seed",
        "1",
        "--format",
        "svg",
        "--plot",
        plot.to_str().unwrap(),
    ]));
    assert!(svg.starts_with("<svg"));
    assert_eq!(std::fs::read_to_string(plot).unwrap(), svg);
}

#[test]
fn estimate_defaults_and_degenerate_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let fbm = dir.path().join("fbm.csv");
    assert!(mfrac(&[
        "simulate",
        "fbm",
        "--hurst-const",
        "0.7",
        "--points",
        "16385",
        "--seed",
        "4",
        "-o",
        fbm.to_str().unwrap(),
    ])
    .status
    .success());
    let table = stdout(&mfrac(&["estimate", fbm.to_str().unwrap()]));
    let rows: Vec<&str> = table.lines().collect();
    assert_eq!(rows[0], "interval_start,raw,smoothed");
    assert_eq!(rows.len(), 101);
    let raw: Vec<f64> = rows[1..]
        .iter()
        .map(|r| r.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    let mean = raw.iter().sum::<f64>() / raw.len() as f64;
    assert!((mean - 0.7).abs() < 0.1, "mean {mean}");

    let lfd = stdout(&mfrac(&[
        "estimate",
        fbm.to_str().unwrap(),
        "--lfd",
        "-N",
        "20",
    ]));
    assert_eq!(lfd.lines().count(), 21);

    let affine: String = std::iter::once("t,x\n".to_string())
        .chain((0..=800).map(|i| format!("{},{}\n", i as f64 / 800.0, 3.0 * i as f64 / 800.0)))
        .collect();
    let p = write(dir.path(), "affine.csv", &affine);
    let json = stdout(&mfrac(&["estimate", &p, "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["diagnostics"]["degenerate"], true);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = mfrac(&["simulate", "ghbmp", "--hurst", "0.3 +", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("byte 5"));
    assert_eq!(
        mfrac(&["simulate", "ghbmp", "--no-such-flag"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        mfrac(&[
            "cluster",
            dir.path().to_str().unwrap(),
            "--method",
            "kmeans"
        ])
        .status
        .code(),
        Some(2)
    );

    let bad = write(dir.path(), "bad.csv", "t,x\n0,1\n1,abc\n");
    let o = mfrac(&["estimate", &bad]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3, column 2"));
    assert_eq!(
        mfrac(&["estimate", "/nonexistent/x.csv"]).status.code(),
        Some(3)
    );

    assert_eq!(
        mfrac(&["simulate", "ghbmp", "--hurst", "1.5", "--seed", "1"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        mfrac(&["simulate", "fbm", "--hurst-const", "0", "--seed", "1"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        mfrac(&["bench-trunc", "--levels", "2", "--reps", "1", "--seed", "1"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(mfrac(&["--help"]).status.code(), Some(0));
}

#[test]
fn bench_trunc_columns() {
    let csv = stdout(&mfrac(&[
        "bench-trunc",
        "--levels",
        "5,6",
        "--reps",
        "2",
        "--seed",
        "1",
    ]));
    assert_eq!(
        csv.lines().next().unwrap(),
        "J,max_err,mean_err,mse,mean_elapsed_s"
    );
    assert_eq!(csv.lines().count(), 3);
    let quiet = stdout(&mfrac(&[
        "bench-trunc",
        "--levels",
        "5",
        "--reps",
        "1",
        "--seed",
        "1",
        "--no-timing",
    ]));
    assert_eq!(quiet.lines().next().unwrap(), "J,max_err,mean_err,mse");
}

#[test]
fn covariance_cluster_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let cov = stdout(&mfrac(&[
        "covariance",
        "--hurst",
        "0.3",
        "--points",
        "6",
        "--trunc",
        "5",
    ]));
    let lines: Vec<&str> = cov.lines().collect();
    assert_eq!(lines.len(), 7);
    assert_eq!(lines[1], "0,0,0,0,0,0,0");

    let series = dir.path().join("series");
    std::fs::create_dir(&series).unwrap();
    for (i, h) in ["0.2", "0.25", "0.8", "0.75"].iter().enumerate() {
        let out = series.join(format!("r{i}.csv"));
        assert!(mfrac(&[
            "simulate",
            "ghbmp",
            "--hurst",
            h,
            "--points",
            "4097",
            "--trunc",
            "12",
            "--seed",
            &i.to_string(),
            "-o",
            out.to_str().unwrap(),
        ])
        .status
        .success());
    }
    let dir_arg = series.to_str().unwrap();
    let hc = stdout(&mfrac(&["cluster", dir_arg, "-k", "2"]));
    let labels: Vec<&str> = hc
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(labels, ["1", "1", "2", "2"]);
    let km = stdout(&mfrac(&[
        "cluster", dir_arg, "-k", "2", "--method", "kmeans", "--seed", "5", "--nstart", "3",
        "--format", "json",
    ]));
    let v: serde_json::Value = serde_json::from_str(&km).unwrap();
    assert_eq!(v["cluster_sizes"], serde_json::json!([2, 2]));
    let emp = stdout(&mfrac(&[
        "covariance",
        "--mode",
        "empirical",
        "--input-dir",
        dir_arg,
        "--format",
        "json",
    ]));
    let v: serde_json::Value = serde_json::from_str(&emp).unwrap();
    assert_eq!(v["n"], 4097);

    let ramp = write(dir.path(), "ramp.csv", "t,x\n0,0\n1,1\n");
    let s = stdout(&mfrac(&[
        "stats",
        &ramp,
        "--level",
        "0.5",
        "--resample",
        "1000",
    ]));
    assert!(s.contains("sojourn,0.501"));
    let prices = write(dir.path(), "prices.csv", "1\n2\n1.5\n2.5\n3\n");
    let r = stdout(&mfrac(&["stats", &prices, "--rsi", "2"]));
    assert_eq!(r.lines().nth(1).unwrap(), "0,1,");
}

#[test]
fn threads_flag_and_environment() {
    let args = [
        "simulate", "ghbmp", "--hurst", "0.4", "--points", "1025", "--trunc", "10", "--seed", "2",
    ];
    let base = stdout(&mfrac(&args));
    let mut with_flag = vec!["--threads", "1"];
    with_flag.extend(args);
    assert_eq!(stdout(&mfrac(&with_flag)), base);
    let o = Command::new(env!("CARGO_BIN_EXE_mfrac"))
        .args(args)
        .env("MFRAC_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(stdout(&o), base);
    assert_eq!(
        mfrac(&["--threads", "0", "simulate", "bm"]).status.code(),
        Some(2)
    );
}
