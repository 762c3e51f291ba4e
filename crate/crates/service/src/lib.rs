//! HTTP endpoints for inpainting and metrics.
//!
//! - `POST /api/inpaint`: multipart `image`, `mask` (PNG) plus optional
//!   `k_total`, `edge_threshold`, `max_passes` text fields. Replies with the
//!   restored PNG and an `X-Elapsed-Seconds` header.
//! - `POST /api/metrics`: multipart `reference`, `test`. Replies with
//!   `{"psnr_db": .., "ssim": ..}`; infinities are sent as `"inf"`.
//! - `GET /health`: `{"status": "ok", "version": ..}`.
//!
//! Engine work runs on blocking threads behind a fair semaphore, so at most
//! `workers` requests compute at once and the rest wait in arrival order.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use adaptive_inpaint::bench::json_real;
use adaptive_inpaint::{
    decode_image, decode_mask, encode_png, inpaint, psnr, ssim, Error, Image, InpaintConfig,
};
use axum::extract::multipart::{Multipart, MultipartError, MultipartRejection};
use axum::extract::{DefaultBodyLimit, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::json;
use tokio::sync::Semaphore;
use tower_http::services::ServeDir;

pub const DEFAULT_BODY_LIMIT: usize = 32 * 1024 * 1024;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub body_limit: usize,
    /// Concurrent engine computations.
    pub workers: usize,
    /// Directory served at `/` (the UI bundle).
    pub static_dir: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            body_limit: DEFAULT_BODY_LIMIT,
            workers: std::thread::available_parallelism().map_or(2, |n| n.get()),
            static_dir: None,
        }
    }
}

#[derive(Clone)]
struct AppState {
    permits: Arc<Semaphore>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn bad_request(message: impl Into<String>) -> Self {
        Self {
            status: StatusCode::BAD_REQUEST,
            message: message.into(),
        }
    }

    fn internal() -> Self {
        Self {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            message: "internal error".into(),
        }
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. } | Error::Report(_) => Self::internal(),
            other => Self::bad_request(other.to_string()),
        }
    }
}

impl From<MultipartError> for ApiError {
    fn from(e: MultipartError) -> Self {
        Self {
            status: e.status(),
            message: e.body_text(),
        }
    }
}

impl From<MultipartRejection> for ApiError {
    fn from(e: MultipartRejection) -> Self {
        Self {
            status: e.status(),
            message: e.body_text(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

pub fn router(cfg: &ServiceConfig) -> Router {
    let state = AppState {
        permits: Arc::new(Semaphore::new(cfg.workers.max(1))),
    };
    let api = Router::new()
        .route("/api/inpaint", post(inpaint_handler))
        .route("/api/metrics", post(metrics_handler))
        .route("/health", get(health))
        .layer(DefaultBodyLimit::max(cfg.body_limit))
        .with_state(state);
    match &cfg.static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

pub async fn serve(addr: SocketAddr, cfg: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(&cfg)).await
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok", "version": env!("CARGO_PKG_VERSION") }))
}

/// Runs `job` on a blocking thread once a worker permit is free.
async fn run_engine<R: Send + 'static>(
    state: &AppState,
    job: impl FnOnce() -> R + Send + 'static,
) -> Result<R, ApiError> {
    let _permit = state
        .permits
        .acquire()
        .await
        .map_err(|_| ApiError::internal())?;
    tokio::task::spawn_blocking(job)
        .await
        .map_err(|_| ApiError::internal())
}

#[derive(Default)]
struct Form {
    files: Vec<(String, Vec<u8>)>,
    fields: Vec<(String, String)>,
}

impl Form {
    async fn read(multipart: Result<Multipart, MultipartRejection>) -> Result<Self, ApiError> {
        let mut multipart = multipart?;
        let mut form = Form::default();
        while let Some(field) = multipart.next_field().await? {
            let name = field.name().unwrap_or_default().to_string();
            if field.file_name().is_some()
                || field
                    .content_type()
                    .is_some_and(|t| t.starts_with("image/"))
            {
                form.files.push((name, field.bytes().await?.to_vec()));
            } else {
                form.fields.push((name, field.text().await?));
            }
        }
        Ok(form)
    }

    fn file(&mut self, name: &str) -> Result<Vec<u8>, ApiError> {
        let i = self
            .files
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| ApiError::bad_request(format!("missing file field `{name}`")))?;
        Ok(self.files.swap_remove(i).1)
    }

    fn parsed<T: std::str::FromStr>(&self, name: &str) -> Result<Option<T>, ApiError> {
        match self.fields.iter().find(|(n, _)| n == name) {
            None => Ok(None),
            Some((_, v)) if v.trim().is_empty() => Ok(None),
            Some((_, v)) => v
                .trim()
                .parse()
                .map(Some)
                .map_err(|_| ApiError::bad_request(format!("invalid value for `{name}`: {v}"))),
        }
    }
}

async fn inpaint_handler(
    State(state): State<AppState>,
    multipart: Result<Multipart, MultipartRejection>,
) -> Result<Response, ApiError> {
    let mut form = Form::read(multipart).await?;
    let image_bytes = form.file("image")?;
    let mask_bytes = form.file("mask")?;
    let mut cfg = InpaintConfig::default();
    if let Some(k) = form.parsed("k_total")? {
        cfg.k_total = k;
    }
    if let Some(t) = form.parsed("edge_threshold")? {
        cfg.edge_threshold = t;
    }
    if let Some(m) = form.parsed("max_passes")? {
        cfg.max_passes = m;
    }
    cfg.validate()?;

    let (png, elapsed) = run_engine(&state, move || -> Result<(Vec<u8>, f64), Error> {
        let image: Image = decode_image(&image_bytes)?;
        let mask = decode_mask(&mask_bytes)?;
        image.check_mask(&mask)?;
        let start = Instant::now();
        let out = inpaint(&image, &mask, &cfg)?;
        let elapsed = start.elapsed().as_secs_f64();
        Ok((encode_png(&out)?, elapsed))
    })
    .await??;

    let mut resp = (StatusCode::OK, png).into_response();
    let headers = resp.headers_mut();
    headers.insert(header::CONTENT_TYPE, HeaderValue::from_static("image/png"));
    headers.insert(
        "x-elapsed-seconds",
        HeaderValue::from_str(&format!("{elapsed:.6}")).map_err(|_| ApiError::internal())?,
    );
    Ok(resp)
}

async fn metrics_handler(
    State(state): State<AppState>,
    multipart: Result<Multipart, MultipartRejection>,
) -> Result<Json<serde_json::Value>, ApiError> {
    let mut form = Form::read(multipart).await?;
    let reference = form.file("reference")?;
    let test = form.file("test")?;
    let (p, s) = run_engine(&state, move || -> Result<(f64, f64), Error> {
        let a: Image = decode_image(&reference)?;
        let b: Image = decode_image(&test)?;
        Ok((psnr(&a, &b)?, ssim(&a, &b)?))
    })
    .await??;
    Ok(Json(
        json!({ "psnr_db": json_real(p), "ssim": json_real(s) }),
    ))
}
