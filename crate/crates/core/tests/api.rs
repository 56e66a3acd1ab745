use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use mfrac::api::{
    router, ClusterRequest, CovarianceRequest, EstimateRequest, Limits, ServerConfig,
    SimulateRequest, StatsRequest,
};
use serde_json::{json, Value};
use tower::ServiceExt;

fn app() -> Router {
    router(ServerConfig::default())
}

async fn send(app: Router, req: Request<Body>) -> (StatusCode, Vec<u8>) {
    let resp = app.oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp
        .into_body()
        .collect()
        .await
        .unwrap()
        .to_bytes()
        .to_vec();
    (status, bytes)
}

async fn post_raw(path: &str, body: &str) -> (StatusCode, Vec<u8>) {
    let req = Request::post(path)
        .header(header::CONTENT_TYPE, "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    send(app(), req).await
}

async fn post(path: &str, body: Value) -> (StatusCode, Value) {
    let (s, b) = post_raw(path, &body.to_string()).await;
    (s, serde_json::from_slice(&b).unwrap())
}

#[tokio::test]
async fn health_and_index() {
    let (s, b) = send(
        app(),
        Request::get("/api/health").body(Body::empty()).unwrap(),
    )
    .await;
    assert_eq!(s, StatusCode::OK);
    let v: Value = serde_json::from_slice(&b).unwrap();
    assert_eq!(v["status"], "ok");
    let (s, b) = send(app(), Request::get("/").body(Body::empty()).unwrap()).await;
    assert_eq!(s, StatusCode::OK);
    assert!(String::from_utf8(b).unwrap().contains("/api"));
}

#[tokio::test]
async fn static_dir_is_served() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<p>bundle</p>").unwrap();
    let app = router(ServerConfig {
        static_dir: Some(dir.path().to_path_buf()),
        ..Default::default()
    });
    let (s, b) = send(app, Request::get("/").body(Body::empty()).unwrap()).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(b, b"<p>bundle</p>");
}

#[tokio::test]
async fn unknown_endpoint_is_json_404() {
    let (s, v) = post("/api/nope", json!({})).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_eq!(v["error"]["code"], "not_found");
}

#[tokio::test]
async fn seeded_simulation_is_reproducible() {
    let body =
        json!({"kind": "ghbmp", "hurst_expr": "0.3", "points": 513, "trunc_J": 9, "seed": 7});
    let (s1, b1) = post_raw("/api/simulate", &body.to_string()).await;
    let (s2, b2) = post_raw("/api/simulate", &body.to_string()).await;
    assert_eq!(s1, StatusCode::OK);
    assert_eq!(s2, StatusCode::OK);
    assert_eq!(b1, b2);
    let v: Value = serde_json::from_slice(&b1).unwrap();
    assert_eq!(v["t"][0], 0.0);
    assert_eq!(v["x"][0], 0.0);
    assert_eq!(v["meta"]["seed"], 7);
    assert_eq!(v["meta"]["J"], 9);
    assert_eq!(v["x"].as_array().unwrap().len(), 513);
    assert!(v["meta"].get("elapsed_ms").is_none());
}

#[tokio::test]
async fn concurrent_duplicates_return_identical_bodies() {
    let body = json!({"kind": "ghbmp", "hurst_expr": "0.8 - 0.55*t", "points": 1025, "trunc_J": 10, "seed": 11})
        .to_string();
    let tasks: Vec<_> = (0..6)
        .map(|_| {
            let b = body.clone();
            tokio::spawn(async move { post_raw("/api/simulate", &b).await })
        })
        .collect();
    let mut bodies = Vec::new();
    for t in tasks {
        let (s, b) = t.await.unwrap();
        assert_eq!(s, StatusCode::OK);
        bodies.push(b);
    }
    assert!(bodies.windows(2).all(|w| w[0] == w[1]));
}

#[tokio::test]
async fn missing_seed_is_generated_and_echoed() {
    let (s, v) = post("/api/simulate", json!({"kind": "bm", "points": 33})).await;
    assert_eq!(s, StatusCode::OK);
    let seed = v["meta"]["seed"].as_u64().unwrap();
    let (_, again) = post(
        "/api/simulate",
        json!({"kind": "bm", "points": 33, "seed": seed}),
    )
    .await;
    assert_eq!(v["x"], again["x"]);
}

#[tokio::test]
async fn timing_is_opt_in() {
    let (_, v) = post(
        "/api/simulate",
        json!({"kind": "fgn", "hurst": 0.6, "points": 64, "seed": 1, "timing": true}),
    )
    .await;
    assert!(v["meta"]["elapsed_ms"].as_f64().unwrap() >= 0.0);
    assert_eq!(v["t"][63], 63.0);
}

#[tokio::test]
async fn malformed_expression_reports_offset() {
    let (s, v) = post(
        "/api/simulate",
        json!({"kind": "ghbmp", "hurst_expr": "0.3 + * t", "seed": 1}),
    )
    .await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"]["code"], "parse_error");
    assert_eq!(v["error"]["offset"], 6);
    assert!(v["error"]["message"].as_str().unwrap().contains("`*`"));
}

#[tokio::test]
async fn schema_errors_are_bad_requests() {
    let (s, b) = post_raw("/api/simulate", "{\"kind\": \"ghbmp\",\n \"points\": }").await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let v: Value = serde_json::from_slice(&b).unwrap();
    assert_eq!(v["error"]["code"], "invalid_json");
    assert_eq!(v["error"]["offset"], 29);

    let (s, v) = post(
        "/api/simulate",
        json!({"kind": "ghbmp", "hurst_expr": "0.3", "colour": 1}),
    )
    .await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"]["code"], "schema_error");

    let (s, v) = post("/api/simulate", json!({"kind": "levy"})).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"]["code"], "schema_error");

    let (s, v) = post("/api/estimate", json!({"series": {"t": [0, 1], "x": [0]}})).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert!(v["error"]["message"].is_string());
}

#[tokio::test]
async fn domain_errors_are_unprocessable() {
    let (s, v) = post(
        "/api/simulate",
        json!({"kind": "ghbmp", "hurst_expr": "1.5 + t", "seed": 1}),
    )
    .await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"]["code"], "domain_error");
    let (s, _) = post(
        "/api/simulate",
        json!({"kind": "fbm", "hurst_expr": "0.3 + t", "seed": 1}),
    )
    .await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    let (s, _) = post(
        "/api/simulate",
        json!({"kind": "fbm", "hurst": 1.2, "seed": 1}),
    )
    .await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn point_cap_gives_413() {
    let cap = Limits::default().max_points;
    let (s, v) = post(
        "/api/simulate",
        json!({"kind": "bm", "points": cap + 1, "seed": 1}),
    )
    .await;
    assert_eq!(s, StatusCode::PAYLOAD_TOO_LARGE);
    assert_eq!(v["error"]["code"], "resource_limit");
    let (s, _) = post(
        "/api/simulate",
        json!({"kind": "ghbmp", "hurst": 0.5, "points": 9, "trunc_J": 40, "seed": 1}),
    )
    .await;
    assert_eq!(s, StatusCode::PAYLOAD_TOO_LARGE);
}

#[tokio::test]
async fn estimate_defaults_and_degenerate_flag() {
    let t: Vec<f64> = (0..=1000).map(|i| i as f64 / 1000.0).collect();
    let x: Vec<f64> = t.iter().map(|t| 2.0 * t - 1.0).collect();
    let (s, v) = post(
        "/api/estimate",
        json!({"series": {"t": t, "x": x}, "N": 50}),
    )
    .await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["raw"].as_array().unwrap().len(), 50);
    assert_eq!(v["diagnostics"]["degenerate"], true);

    let csv = "t,x\n".to_string()
        + &(0..=200)
            .map(|i| format!("{},{}\n", i as f64 / 200.0, ((i * 7919) % 13) as f64))
            .collect::<String>();
    let (s, v) = post("/api/estimate", json!({"csv": csv})).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"]["code"], "insufficient_data");
}

#[tokio::test]
async fn estimate_of_simulated_fbm_is_close() {
    let body = json!({"simulate": {"kind": "fbm", "hurst": 0.7, "points": 16385, "seed": 5}});
    let (s, v) = post("/api/estimate", body).await;
    assert_eq!(s, StatusCode::OK);
    let raw: Vec<f64> = serde_json::from_value(v["raw"].clone()).unwrap();
    assert_eq!(raw.len(), 100);
    let mean = raw.iter().sum::<f64>() / raw.len() as f64;
    assert!((mean - 0.7).abs() < 0.1, "mean {mean}");
    let lfd: Vec<f64> = serde_json::from_value(v["lfd_raw"].clone()).unwrap();
    assert!((lfd[3] + raw[3] - 2.0).abs() < 1e-12);
    assert_eq!(v["meta"]["seed"], 5);
    assert_eq!(v["series"]["x"][0], 0.0);
}

#[tokio::test]
async fn covariance_endpoint() {
    let (s, v) = post(
        "/api/covariance",
        json!({"hurst_expr": "0.3", "points": 11, "trunc_J": 6}),
    )
    .await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["n"], 11);
    let e: Vec<f64> = serde_json::from_value(v["entries"].clone()).unwrap();
    for i in 0..11 {
        assert_eq!(e[i], 0.0);
        for j in 0..11 {
            assert_eq!(e[i * 11 + j], e[j * 11 + i]);
        }
    }
    let (s, v) = post(
        "/api/covariance",
        json!({"mode": "empirical", "hurst": 0.3, "points": 11, "trunc_J": 6, "M": 20, "seed": 3}),
    )
    .await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["meta"]["M"], 20);
    let (s, _) = post("/api/covariance", json!({"hurst": 0.3, "points": 100000})).await;
    assert_eq!(s, StatusCode::PAYLOAD_TOO_LARGE);
}

#[tokio::test]
async fn cluster_endpoint_with_simulated_families() {
    let body = json!({
        "method": "hclust",
        "k": 2,
        "simulate": {"families": ["0.2", "0.8"], "per_family": 3, "points": 4097, "trunc_J": 12},
        "seed": 9
    });
    let (s, v) = post("/api/cluster", body).await;
    assert_eq!(s, StatusCode::OK, "{v}");
    assert_eq!(v["truth"], json!([1, 1, 1, 2, 2, 2]));
    assert_eq!(v["ari"], 1.0);
    assert_eq!(v["cluster_sizes"], json!([3, 3]));
    assert!(v["merge_tree"]["steps"].as_array().unwrap().len() == 5);

    let (s, v) = post(
        "/api/cluster",
        json!({"method": "kmeans", "simulate": {"families": ["0.2"]}}),
    )
    .await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"]["code"], "data_error");

    let (s, v) = post(
        "/api/cluster",
        json!({"k": 2, "simulate": {"families": ["0.2", "0.2 +"]}}),
    )
    .await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert!(v["error"]["message"]
        .as_str()
        .unwrap()
        .starts_with("realization 1"));
}

#[tokio::test]
async fn stats_endpoint() {
    let (s, v) = post(
        "/api/stats",
        json!({"series": {"t": [0.0, 1.0], "x": [0.0, 1.0]}, "level": 0.5, "n": 1000}),
    )
    .await;
    assert_eq!(s, StatusCode::OK);
    assert!((v["level"]["sojourn"].as_f64().unwrap() - 0.5).abs() <= 1e-3 + 1e-12);
    assert_eq!(v["path"]["max"]["time"], 1.0);
    let prices = [1.0, 2.0, 1.5, 2.5, 3.0];
    let (s, v) = post("/api/stats", json!({"prices": prices, "rsi_period": 2})).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["rsi"]["values"][0], Value::Null);
    let (s, _) = post("/api/stats", json!({"level": 0.5})).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
}

#[test]
fn request_schemas_round_trip() {
    fn round_trip<T>(v: Value)
    where
        T: serde::de::DeserializeOwned + serde::Serialize + PartialEq + std::fmt::Debug,
    {
        let parsed: T = serde_json::from_value(v).unwrap();
        let again: T = serde_json::from_value(serde_json::to_value(&parsed).unwrap()).unwrap();
        assert_eq!(parsed, again);
    }
    round_trip::<SimulateRequest>(
        json!({"kind": "fbbridge", "hurst": 0.6, "terminal": 2.0, "points": 11, "seed": 1}),
    );
    round_trip::<EstimateRequest>(
        json!({"csv": "t,x\n0,0\n1,1\n", "N": 10, "Q": 3, "span": 0.5, "grid": "aligned"}),
    );
    round_trip::<EstimateRequest>(json!({"simulate": {"kind": "bm", "points": 401, "seed": 2}}));
    round_trip::<CovarianceRequest>(
        json!({"mode": "empirical", "realizations": [{"t": [0, 1], "x": [0, 1]}], "theta": 0.1}),
    );
    round_trip::<ClusterRequest>(
        json!({"method": "kmeans", "k": 3, "nstart": 5, "distance": "minkowski:3", "linkage": "ward.D2", "simulate": {"families": ["0.3", "0.7"]}}),
    );
    round_trip::<StatsRequest>(
        json!({"series": {"t": [0, 1], "x": [0, 1]}, "level": 0.5, "direction": "lower", "sub_interval": [0.1, 0.9]}),
    );
}
