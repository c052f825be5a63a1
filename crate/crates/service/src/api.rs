//! HTTP session API.
//!
//! Requests on one session are serialized through a fair mutex, so they
//! run one at a time in arrival order; different sessions run in parallel.

use std::collections::HashMap;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tokio::sync::{Mutex, RwLock};

use ricci_rev::flow2d::Flow2DConfig;
use ricci_rev::geometry::generating_curve;
use ricci_rev::mesh::revolve_mesh;
use ricci_rev::ShapeParams;

use crate::error::{Result, ServiceError};
use crate::session::{Direction, Mode, Session, DEFAULT_HISTORY};

type Shared = Arc<Mutex<Session>>;

#[derive(Clone)]
pub struct AppState {
    sessions: Arc<RwLock<HashMap<String, Shared>>>,
    base_cfg: Flow2DConfig,
    history: usize,
}

impl AppState {
    pub fn new(base_cfg: Flow2DConfig, history: usize) -> Self {
        Self {
            sessions: Arc::default(),
            base_cfg,
            history,
        }
    }

    async fn get(&self, id: &str) -> Result<Shared> {
        self.sessions
            .read()
            .await
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::NotFound(id.to_string()))
    }
}

impl Default for AppState {
    fn default() -> Self {
        Self::new(Flow2DConfig::default(), DEFAULT_HISTORY)
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/sessions", post(create))
        .route("/api/sessions/{id}", get(full_snapshot))
        .route("/api/sessions/{id}/shape", put(set_shape))
        .route("/api/sessions/{id}/mode", post(set_mode))
        .route("/api/sessions/{id}/step", post(step))
        .route("/api/sessions/{id}/mesh", get(mesh))
        .route("/api/sessions/{id}/cross-section", get(cross_section))
        .route("/api/sessions/{id}/metric", get(metric))
        .route("/api/sessions/{id}/history", get(history))
        .route("/api/sessions/{id}/history/{index}", get(history_entry))
        .with_state(state)
}

#[derive(Debug, Deserialize)]
pub struct CreateRequest {
    pub c3: f64,
    pub c5: f64,
    pub grid: Option<usize>,
    pub dt: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct CreateResponse {
    pub id: String,
    pub mode: Mode,
}

async fn create(
    State(state): State<AppState>,
    Json(req): Json<CreateRequest>,
) -> Result<(StatusCode, Json<CreateResponse>)> {
    let mut cfg = state.base_cfg.clone();
    if let Some(dt) = req.dt {
        cfg.dt = dt;
    }
    let id = uuid::Uuid::new_v4().simple().to_string();
    let params = ShapeParams::new(req.c3, req.c5);
    let (grid, history, sid) = (req.grid, state.history, id.clone());
    let session =
        tokio::task::spawn_blocking(move || Session::new(sid, params, grid, cfg, history))
            .await
            .map_err(|e| ServiceError::BadRequest(e.to_string()))??;
    state
        .sessions
        .write()
        .await
        .insert(id.clone(), Arc::new(Mutex::new(session)));
    Ok((
        StatusCode::CREATED,
        Json(CreateResponse {
            id,
            mode: Mode::Shape,
        }),
    ))
}

/// Runs `f` on the session's worker thread while holding its lock.
async fn with_session<T, F>(state: &AppState, id: &str, f: F) -> Result<T>
where
    T: Send + 'static,
    F: FnOnce(&mut Session) -> Result<T> + Send + 'static,
{
    let shared = state.get(id).await?;
    let mut guard = shared.lock_owned().await;
    tokio::task::spawn_blocking(move || f(&mut guard))
        .await
        .map_err(|e| ServiceError::BadRequest(e.to_string()))?
}

async fn full_snapshot(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response> {
    let body = with_session(&state, &id, |s| {
        Ok(json!({
            "id": s.id,
            "mode": s.mode(),
            "params": s.params(),
            "snapshot": s.snapshot()?,
        }))
    })
    .await?;
    Ok(Json(body).into_response())
}

#[derive(Debug, Deserialize)]
pub struct ShapeRequest {
    pub c3: f64,
    pub c5: f64,
}

async fn set_shape(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Json(req): Json<ShapeRequest>,
) -> Result<Response> {
    let report = with_session(&state, &id, move |s| {
        s.set_shape(ShapeParams::new(req.c3, req.c5))
    })
    .await?;
    Ok(Json(report).into_response())
}

#[derive(Debug, Deserialize)]
pub struct ModeRequest {
    pub mode: Mode,
}

async fn set_mode(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Json(req): Json<ModeRequest>,
) -> Result<Response> {
    let mode = with_session(&state, &id, move |s| {
        s.set_mode(req.mode)?;
        Ok(s.mode())
    })
    .await?;
    Ok(Json(json!({ "ok": true, "mode": mode })).into_response())
}

#[derive(Debug, Deserialize)]
pub struct StepRequest {
    #[serde(default = "one")]
    pub count: usize,
    #[serde(default)]
    pub direction: Direction,
}

fn one() -> usize {
    1
}

async fn step(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Json(req): Json<StepRequest>,
) -> Result<Response> {
    let report = with_session(&state, &id, move |s| s.step(req.count, req.direction)).await?;
    Ok(Json(report).into_response())
}

#[derive(Debug, Deserialize)]
pub struct MeshQuery {
    pub segments: Option<usize>,
    pub format: Option<String>,
}

async fn mesh(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<MeshQuery>,
) -> Result<Response> {
    let segments = q.segments.unwrap_or(64);
    if !(3..=4096).contains(&segments) {
        return Err(ServiceError::BadRequest(format!(
            "segments must be in 3..=4096, got {segments}"
        )));
    }
    let mesh = with_session(&state, &id, move |s| {
        Ok(revolve_mesh(&generating_curve(s.profile()), segments)?.welded())
    })
    .await?;
    match q.format.as_deref() {
        None | Some("json") => Ok(Json(mesh).into_response()),
        Some("obj") => Ok(([(header::CONTENT_TYPE, "text/plain")], mesh.to_obj()).into_response()),
        Some(other) => Err(ServiceError::BadRequest(format!(
            "unknown mesh format {other:?} (expected json or obj)"
        ))),
    }
}

async fn cross_section(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response> {
    let curve = with_session(&state, &id, |s| Ok(generating_curve(s.profile()))).await?;
    Ok(Json(curve).into_response())
}

async fn metric(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response> {
    let body = with_session(&state, &id, |s| {
        let p = s.profile();
        Ok(json!({ "t": p.t, "rho": p.rho, "h": p.h, "m": p.m }))
    })
    .await?;
    Ok(Json(body).into_response())
}

async fn history(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response> {
    let times = with_session(&state, &id, |s| {
        Ok(s.history().iter().map(|h| h.t).collect::<Vec<_>>())
    })
    .await?;
    Ok(Json(json!({ "len": times.len(), "t": times })).into_response())
}

async fn history_entry(
    State(state): State<AppState>,
    Path((id, index)): Path<(String, usize)>,
) -> Result<Response> {
    let snap = with_session(&state, &id, move |s| {
        s.history().get(index).cloned().ok_or_else(|| {
            ServiceError::BadRequest(format!(
                "history index {index} out of range (len {})",
                s.history().len()
            ))
        })
    })
    .await?;
    Ok(Json(snap).into_response())
}
