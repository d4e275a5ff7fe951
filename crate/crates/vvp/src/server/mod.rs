//! The HTTP service: projects, media, session lifecycle, event ingestion
//! and exports, persisted under a data directory.
//!
//! Layout: `<data_dir>/projects/*.vvp` (media URIs resolve against that
//! directory) and `<data_dir>/sessions/<session_id>.vvlog`. Logs are the
//! source of truth; on startup every log is replayed to rebuild the
//! in-memory sessions.

mod store;
mod views;

use std::io;
use std::sync::Arc;

use axum::body::{Body, Bytes};
use axum::extract::{Path, Request, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Redirect, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};
use tower::ServiceExt;
use tower_http::services::ServeFile;
use vvp_core::analytics::fork_consensus;
use vvp_core::graph::navigation_points;
use vvp_core::session::{AnnotationDraft, CorruptLog, IngestError, SessionEvent, ViewerInput};
use vvp_core::{AnnotationId, MediaId};

use crate::bundle::export_bundle;
use crate::logfile::write_log;
use crate::report::{consensus_value, navigation_value};
use crate::time::now;
use crate::wire::{AnchorDto, BodyItemDto, EventRecord};

pub use store::{CreateError, IngestFailure, Store, StoreError, StoredProject, StoredSession};
pub use views::{input_value, public_project, snapshot};

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn new(status: StatusCode, message: impl ToString) -> Self {
        Self {
            status,
            body: json!({ "error": message.to_string() }),
        }
    }

    fn not_found(what: &str, id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, format!("unknown {what} {id}"))
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<IngestFailure> for ApiError {
    fn from(e: IngestFailure) -> Self {
        match e {
            IngestFailure::Rejected(IngestError::SequenceConflict { expected, got }) => Self {
                status: StatusCode::CONFLICT,
                body: json!({
                    "error": format!("expected seq {expected}, got {got}"),
                    "head_seq": expected.checked_sub(1),
                    "expected_seq": expected,
                }),
            },
            IngestFailure::Rejected(IngestError::SessionEnded) => {
                Self::new(StatusCode::GONE, "session has ended")
            }
            IngestFailure::Rejected(e) => Self::new(StatusCode::UNPROCESSABLE_ENTITY, e),
            IngestFailure::Io(e) => Self::new(StatusCode::INTERNAL_SERVER_ERROR, e),
        }
    }
}

impl From<CorruptLog> for ApiError {
    fn from(e: CorruptLog) -> Self {
        Self::new(
            StatusCode::INTERNAL_SERVER_ERROR,
            format!("corrupt log at seq {}: {}", e.seq, e.reason),
        )
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn parse_body<T: for<'de> Deserialize<'de>>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e))
}

fn project_of<'a>(store: &'a Store, id: &str) -> ApiResult<&'a Arc<StoredProject>> {
    store.project(id).ok_or_else(|| ApiError::not_found("project", id))
}

fn session_of(store: &Store, id: &str) -> ApiResult<Arc<tokio::sync::Mutex<StoredSession>>> {
    store.session(id).ok_or_else(|| ApiError::not_found("session", id))
}

fn records(events: &[SessionEvent]) -> Vec<EventRecord> {
    events.iter().map(EventRecord::from).collect()
}

async fn list_projects(State(store): State<Arc<Store>>) -> Json<Value> {
    Json(Value::Array(
        store
            .projects()
            .map(|p| {
                json!({
                    "id": p.project.id,
                    "title": p.project.title,
                    "playable": p.playable,
                })
            })
            .collect(),
    ))
}

async fn get_project(
    State(store): State<Arc<Store>>,
    Path(id): Path<String>,
) -> ApiResult<Json<Value>> {
    Ok(Json(public_project(&project_of(&store, &id)?.project)))
}

async fn get_navigation(
    State(store): State<Arc<Store>>,
    Path(id): Path<String>,
) -> ApiResult<Json<Value>> {
    let project = &project_of(&store, &id)?.project;
    Ok(Json(navigation_value(&navigation_points(project))))
}

#[derive(Deserialize)]
struct CreateSession {
    project_id: String,
    viewer_id: String,
}

async fn create_session(
    State(store): State<Arc<Store>>,
    body: Bytes,
) -> ApiResult<(StatusCode, Json<Value>)> {
    let req: CreateSession = parse_body(&body)?;
    let id = store
        .create_session(&req.project_id, &req.viewer_id, now())
        .map_err(|e| match e {
            CreateError::UnknownProject(id) => ApiError::not_found("project", &id),
            CreateError::Rejected(e) => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e),
            CreateError::Io(e) => ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e),
        })?;
    Ok((StatusCode::CREATED, Json(json!({ "session_id": id }))))
}

async fn get_snapshot(
    State(store): State<Arc<Store>>,
    Path(id): Path<String>,
) -> ApiResult<Json<Value>> {
    let session = session_of(&store, &id)?;
    let session = session.lock().await;
    Ok(Json(snapshot(&session.state, &session.project.project)))
}

async fn post_event(
    State(store): State<Arc<Store>>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Json<Value>> {
    let session = session_of(&store, &id)?;
    let record: EventRecord = parse_body(&body)?;
    let event = SessionEvent::from(&record);
    let mut session = session.lock().await;
    let events = session.ingest(&event)?;
    Ok(Json(json!({
        "seq": event.seq,
        "events": records(&events),
        "next_seq": session.state.next_seq,
    })))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AnnotationRequest {
    /// When present, must equal the session's next seq.
    seq: Option<u64>,
    annotation_id: Option<String>,
    anchor: AnchorDto,
    title: String,
    #[serde(default)]
    body: Vec<BodyItemDto>,
}

async fn post_annotation(
    State(store): State<Arc<Store>>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Json<Value>> {
    let session = session_of(&store, &id)?;
    let req: AnnotationRequest = parse_body(&body)?;
    let annotation_id = req
        .annotation_id
        .unwrap_or_else(|| uuid::Uuid::new_v4().to_string());
    let draft = AnnotationDraft {
        annotation_id: AnnotationId::new(annotation_id.clone()),
        anchor: (&req.anchor).into(),
        title: req.title,
        body: req.body.iter().map(Into::into).collect(),
    };
    let mut session = session.lock().await;
    if let Some(seq) = req.seq {
        if !session.state.is_ended() && seq != session.state.next_seq {
            return Err(IngestFailure::Rejected(IngestError::SequenceConflict {
                expected: session.state.next_seq,
                got: seq,
            })
            .into());
        }
    }
    let events = session.apply(&ViewerInput::AddViewerAnnotation(draft), now())?;
    Ok(Json(json!({
        "seq": events[0].seq,
        "annotation_id": annotation_id,
        "events": records(&events),
        "next_seq": session.state.next_seq,
    })))
}

async fn export_session(
    State(store): State<Arc<Store>>,
    Path(id): Path<String>,
) -> ApiResult<Response> {
    let session = session_of(&store, &id)?;
    let text = write_log(&session.lock().await.events);
    Ok(([(header::CONTENT_TYPE, "application/x-ndjson")], text).into_response())
}

async fn export_project(
    State(store): State<Arc<Store>>,
    Path(id): Path<String>,
) -> ApiResult<Response> {
    let project = project_of(&store, &id)?;
    let logs = store.project_logs(&id).await;
    let text = export_bundle(&project.project, &logs)?;
    Ok(([(header::CONTENT_TYPE, "application/json")], text).into_response())
}

async fn consensus(
    State(store): State<Arc<Store>>,
    Path(id): Path<String>,
) -> ApiResult<Json<Value>> {
    let project = project_of(&store, &id)?;
    let logs = store.project_logs(&id).await;
    Ok(Json(consensus_value(&fork_consensus(&project.project, &logs)?)))
}

async fn media(
    State(store): State<Arc<Store>>,
    Path(media_id): Path<String>,
    request: Request,
) -> ApiResult<Response> {
    let key = MediaId::new(media_id.clone());
    let (root, descriptor) = store
        .projects()
        .find_map(|p| p.project.media_assets.get(&key).map(|m| (&p.media_root, m)))
        .ok_or_else(|| ApiError::not_found("media", &media_id))?;
    if descriptor.is_url() {
        return Ok(Redirect::temporary(&descriptor.uri).into_response());
    }
    let mut response = ServeFile::new(root.join(&descriptor.uri))
        .oneshot(request)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e))?;
    if response.status().is_success() {
        if let Ok(mime) = header::HeaderValue::from_str(&descriptor.mime_hint) {
            if !descriptor.mime_hint.is_empty() {
                response.headers_mut().insert(header::CONTENT_TYPE, mime);
            }
        }
    }
    Ok(response.map(Body::new))
}

pub fn router(store: Arc<Store>) -> Router {
    Router::new()
        .route("/api/projects", get(list_projects))
        .route("/api/projects/{id}", get(get_project))
        .route("/api/projects/{id}/navigation", get(get_navigation))
        .route("/api/projects/{id}/export", get(export_project))
        .route("/api/projects/{id}/analytics/consensus", get(consensus))
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/{id}/snapshot", get(get_snapshot))
        .route("/api/sessions/{id}/events", post(post_event))
        .route("/api/sessions/{id}/annotations", post(post_annotation))
        .route("/api/sessions/{id}/export", get(export_session))
        .route("/media/{media_id}", get(media))
        .with_state(store)
}

/// Serves until Ctrl-C.
pub async fn serve(listener: tokio::net::TcpListener, store: Arc<Store>) -> io::Result<()> {
    axum::serve(listener, router(store))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
