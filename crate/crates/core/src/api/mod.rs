//! Stateless JSON service over the analysis routines.
//!
//! | Route | Body |
//! |---|---|
//! | `POST /api/simulate` | [`SimulateRequest`] |
//! | `POST /api/estimate` | [`EstimateRequest`] |
//! | `POST /api/covariance` | [`CovarianceRequest`] |
//! | `POST /api/cluster` | [`ClusterRequest`] |
//! | `POST /api/stats` | [`StatsRequest`] |
//! | `GET /api/health` | none |
//!
//! Failures return `{"error": {"code", "message", "offset"?}}` with status 400 for malformed
//! or invalid requests, 413 when a size limit is exceeded and 422 for domain errors.

mod schema;

use std::net::SocketAddr;
use std::path::PathBuf;

use axum::body::Bytes;
use axum::extract::rejection::BytesRejection;
use axum::extract::{DefaultBodyLimit, State};
use axum::http::{header, Method, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;
use tower_http::cors::{Any, CorsLayer};
use tower_http::services::ServeDir;

pub use schema::*;

use crate::error::Error;

/// Largest accepted request body.
pub const MAX_BODY_BYTES: usize = 64 << 20;
pub const DEFAULT_PORT: u16 = 8787;

/// Service configuration.
#[derive(Debug, Clone, Default)]
pub struct ServerConfig {
    pub limits: Limits,
    /// Directory of static assets served at `/`; a placeholder page is served when absent.
    pub static_dir: Option<PathBuf>,
}

/// An error response.
#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: String,
    pub message: String,
    pub offset: Option<usize>,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            code: code.into(),
            message: message.into(),
            offset: None,
        }
    }

    /// Error for a body that failed to deserialize.
    pub fn from_json(body: &[u8], e: &serde_json::Error) -> Self {
        use serde_json::error::Category;
        let code = match e.classify() {
            Category::Data => "schema_error",
            _ => "invalid_json",
        };
        let mut err = ApiError::new(StatusCode::BAD_REQUEST, code, e.to_string());
        if e.line() > 0 {
            err.offset = Some(byte_offset(body, e.line(), e.column()));
        }
        err
    }
}

/// Byte offset of a 1-based line and column as reported by the JSON parser.
fn byte_offset(body: &[u8], line: usize, column: usize) -> usize {
    let line_start: usize = body
        .split(|b| *b == b'\n')
        .take(line - 1)
        .map(|l| l.len() + 1)
        .sum();
    (line_start + column.saturating_sub(1)).min(body.len())
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match e.root() {
            Error::Parse { .. } | Error::Data(_) => StatusCode::BAD_REQUEST,
            Error::Resource(_) => StatusCode::PAYLOAD_TOO_LARGE,
            Error::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        let offset = match e.root() {
            Error::Parse { offset, .. } => Some(*offset),
            _ => None,
        };
        ApiError {
            status,
            code: e.code().into(),
            message: e.to_string(),
            offset,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = json!({ "code": self.code, "message": self.message });
        if let Some(o) = self.offset {
            body["offset"] = json!(o);
        }
        (self.status, Json(json!({ "error": body }))).into_response()
    }
}

/// Deserialize a request body and run a handler on it, mapping every failure to [`ApiError`].
pub fn handle<Req, Resp>(
    body: &[u8],
    limits: &Limits,
    f: fn(&Req, &Limits) -> crate::Result<Resp>,
) -> Result<Resp, ApiError>
where
    Req: DeserializeOwned,
{
    let req: Req = serde_json::from_slice(body).map_err(|e| ApiError::from_json(body, &e))?;
    Ok(f(&req, limits)?)
}

async fn dispatch<Req, Resp>(
    limits: Limits,
    body: Result<Bytes, BytesRejection>,
    f: fn(&Req, &Limits) -> crate::Result<Resp>,
) -> Response
where
    Req: DeserializeOwned + 'static,
    Resp: Serialize + Send + 'static,
{
    let body = match body {
        Ok(b) => b,
        Err(r) => return ApiError::new(r.status(), "invalid_body", r.body_text()).into_response(),
    };
    let task = tokio::task::spawn_blocking(move || handle(&body, &limits, f));
    match task.await {
        Ok(Ok(resp)) => Json(resp).into_response(),
        Ok(Err(e)) => e.into_response(),
        Err(e) => {
            log::error!("request handler failed: {e}");
            ApiError::new(
                StatusCode::INTERNAL_SERVER_ERROR,
                "internal",
                "request handler failed",
            )
            .into_response()
        }
    }
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok", "version": env!("CARGO_PKG_VERSION") }))
}

async fn placeholder() -> Html<&'static str> {
    Html(
        "<!doctype html><html><head><title>mfrac</title></head><body>\
         <h1>mfrac service</h1><p>The JSON endpoints live under <code>/api</code>.</p>\
         </body></html>",
    )
}

async fn api_not_found() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "not_found", "no such endpoint")
}

/// Build the service router.
pub fn router(cfg: ServerConfig) -> Router {
    let api = Router::new()
        .route(
            "/simulate",
            post(|State(l): State<Limits>, b| dispatch(l, b, simulate)),
        )
        .route(
            "/estimate",
            post(|State(l): State<Limits>, b| dispatch(l, b, estimate)),
        )
        .route(
            "/covariance",
            post(|State(l): State<Limits>, b| dispatch(l, b, covariance)),
        )
        .route(
            "/cluster",
            post(|State(l): State<Limits>, b| dispatch(l, b, cluster)),
        )
        .route(
            "/stats",
            post(|State(l): State<Limits>, b| dispatch(l, b, stats)),
        )
        .route("/health", get(health))
        .fallback(api_not_found)
        .with_state(cfg.limits);
    let cors = CorsLayer::new()
        .allow_origin(Any)
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE]);
    let app = Router::new().nest("/api", api);
    let app = match cfg.static_dir {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app.route("/", get(placeholder)),
    };
    app.layer(DefaultBodyLimit::max(MAX_BODY_BYTES)).layer(cors)
}

/// Serve until Ctrl-C.
pub async fn serve(addr: SocketAddr, cfg: ServerConfig) -> crate::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(cfg))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
