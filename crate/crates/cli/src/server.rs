// SPDX-License-Identifier: MIT OR Apache-2.0

//! JSON-over-HTTP front end for [`crate::job`].

use std::convert::Infallible;
use std::path::PathBuf;

use axum::body::{Body, Bytes};
use axum::extract::Path;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tokio::sync::mpsc;
use tokio_stream::wrappers::ReceiverStream;
use tokio_stream::StreamExt;
use tower_http::services::ServeDir;

use rectpeg_core::curve::{preset, CurveDocument, CurveValidityReport, PRESET_NAMES};
use rectpeg_core::Error;

use crate::job::{
    execute, fit_points, prepare, sweep_record, ErrorCode, JobError, JobRequest, JobResult, Mode,
};

const NDJSON: &str = "application/x-ndjson";

/// Routes for every `/api` endpoint, plus static files when `static_dir`
/// is given.
pub fn router(static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/presets", get(presets))
        .route("/api/fit", post(fit))
        .route("/api/sweep", post(sweep))
        .route("/api/{mode}", post(job));
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

/// Serves the router on `addr` until ctrl-c.
pub async fn serve(addr: std::net::SocketAddr, static_dir: Option<PathBuf>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(static_dir))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

pub fn status_of(code: ErrorCode) -> StatusCode {
    match code {
        ErrorCode::ValidationFailed | ErrorCode::NoSolutionFound => {
            StatusCode::UNPROCESSABLE_ENTITY
        }
        ErrorCode::Internal | ErrorCode::Io => StatusCode::INTERNAL_SERVER_ERROR,
        _ => StatusCode::BAD_REQUEST,
    }
}

struct ApiError(JobError);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (status_of(self.0.code), Json(self.0.body())).into_response()
    }
}

impl From<JobError> for ApiError {
    fn from(e: JobError) -> Self {
        ApiError(e)
    }
}

fn parse_body<T: for<'de> Deserialize<'de>>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| {
        let err: JobError = Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
        .into();
        ApiError(err)
    })
}

fn parse_mode(name: &str) -> Option<Mode> {
    match name {
        "solve" => Some(Mode::Solve),
        "porism" => Some(Mode::Porism),
        "verify" => Some(Mode::Verify),
        "oracle" => Some(Mode::Oracle),
        _ => None,
    }
}

fn request_for(body: &[u8], mode: Mode) -> Result<JobRequest, ApiError> {
    let mut req: JobRequest = parse_body(body)?;
    match req.mode {
        Some(m) if m != mode => {
            return Err(JobError::invalid(format!(
                "request mode `{m}` does not match endpoint /api/{mode}"
            ))
            .into())
        }
        _ => req.mode = Some(mode),
    }
    Ok(req)
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, JobError> + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError(JobError::new(ErrorCode::Internal, e.to_string())))?
        .map_err(ApiError)
}

async fn job(Path(name): Path<String>, body: Bytes) -> Result<Json<JobResult>, ApiError> {
    let mode = parse_mode(&name).ok_or_else(|| {
        ApiError(JobError {
            code: ErrorCode::InvalidRequest,
            message: format!("unknown endpoint /api/{name}"),
            detail: json!({"endpoint": name}),
        })
    })?;
    let req = request_for(&body, mode)?;
    let result = blocking(move || execute(&prepare(&req)?, |_, _| {})).await?;
    Ok(Json(result))
}

#[derive(Serialize)]
struct Final<'a> {
    result: &'a JobResult,
}

#[derive(Serialize)]
struct Failed<'a> {
    error: &'a crate::job::ErrorBody,
}

/// Streams one line per sweep step, then a final `{"result": ...}` line, or
/// `{"error": ...}` if the sweep fails after streaming has begun.
async fn sweep(body: Bytes) -> Result<Response, ApiError> {
    let req = request_for(&body, Mode::Sweep)?;
    let job = blocking(move || prepare(&req)).await?;
    let (tx, rx) = mpsc::channel::<String>(64);
    tokio::task::spawn_blocking(move || {
        let outcome = execute(&job, |entry, links| {
            let _ = tx.blocking_send(sweep_record(entry, links));
        });
        let last = match &outcome {
            Ok(result) => serde_json::to_string(&Final { result }),
            Err(e) => serde_json::to_string(&Failed { error: &e.body() }),
        };
        let _ = tx.blocking_send(last.expect("final line serializes"));
    });
    let stream = ReceiverStream::new(rx).map(|mut line| {
        line.push('\n');
        Ok::<_, Infallible>(line)
    });
    Ok(([(header::CONTENT_TYPE, NDJSON)], Body::from_stream(stream)).into_response())
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct FitRequest {
    points: Vec<[f64; 2]>,
    #[serde(default)]
    cutoff: Option<usize>,
}

/// Response of `POST /api/fit`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResponse {
    pub curve: CurveDocument,
    pub validity: CurveValidityReport,
}

async fn fit(body: Bytes) -> Result<Json<FitResponse>, ApiError> {
    let req: FitRequest = parse_body(&body)?;
    let (curve, validity) = blocking(move || {
        fit_points(&req.points, req.cutoff).map_err(|e| JobError {
            message: format!("fit: {}", e.message),
            ..e
        })
    })
    .await?;
    Ok(Json(FitResponse {
        curve: CurveDocument::from_curve(&curve),
        validity,
    }))
}

/// One entry of `GET /api/presets`: the accepted syntax and the curve for
/// the default arguments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresetInfo {
    pub name: String,
    pub syntax: String,
    pub curve: CurveDocument,
}

pub fn preset_list() -> Vec<PresetInfo> {
    PRESET_NAMES
        .iter()
        .map(|syntax| {
            let name = syntax.split('(').next().unwrap_or(syntax);
            let curve = preset(name).expect("preset names resolve");
            PresetInfo {
                name: name.to_string(),
                syntax: syntax.to_string(),
                curve: CurveDocument::from_curve(&curve),
            }
        })
        .collect()
}

async fn presets() -> Json<Vec<PresetInfo>> {
    Json(preset_list())
}
