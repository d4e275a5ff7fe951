//! In-process HTTP helpers and a client that mirrors the engine.

use std::path::Path;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use vvp::document::serialize_project;
use vvp::logfile::{format_event, parse_log};
use vvp::server::{router, Store};
use vvp::wire::EventRecord;
use vvp_core::graph::VideoProject;
use vvp_core::sample::delivery_project;
use vvp_core::session::{replay, SessionEvent, SessionState, ViewerInput};
use vvp_core::Timestamp;

pub fn data_dir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let projects = dir.path().join("projects");
    std::fs::create_dir_all(projects.join("media")).unwrap();
    std::fs::write(
        projects.join("delivery.vvp"),
        serialize_project(&delivery_project()),
    )
    .unwrap();
    let clip: Vec<u8> = (0..=255u8).cycle().take(4096).collect();
    std::fs::write(projects.join("media/s_intro.mp4"), clip).unwrap();
    dir
}

pub fn app(dir: &Path) -> Router {
    router(Arc::new(Store::open(dir).unwrap()))
}

pub async fn call(app: &Router, method: Method, uri: &str, body: Option<String>) -> (StatusCode, Vec<u8>) {
    let mut req = Request::builder().method(method).uri(uri);
    if body.is_some() {
        req = req.header(header::CONTENT_TYPE, "application/json");
    }
    let req = req.body(body.map_or_else(Body::empty, Body::from)).unwrap();
    let res = tower::ServiceExt::oneshot(app.clone(), req).await.unwrap();
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes().to_vec();
    (status, bytes)
}

pub async fn get_json(app: &Router, uri: &str) -> (StatusCode, Value) {
    let (status, body) = call(app, Method::GET, uri, None).await;
    (status, serde_json::from_slice(&body).unwrap_or(Value::Null))
}

pub async fn post_json(app: &Router, uri: &str, body: String) -> (StatusCode, Value) {
    let (status, body) = call(app, Method::POST, uri, Some(body)).await;
    (status, serde_json::from_slice(&body).unwrap_or(Value::Null))
}

/// A player that mirrors the engine locally and posts the first event of
/// every transition, as the browser client does.
pub struct Client {
    pub app: Router,
    pub project: VideoProject,
    pub id: String,
    pub state: SessionState,
    pub now: Timestamp,
}

impl Client {
    pub async fn start(app: &Router, viewer: &str) -> Self {
        let (status, body) = post_json(
            app,
            "/api/sessions",
            json!({ "project_id": "rural-delivery", "viewer_id": viewer }).to_string(),
        )
        .await;
        assert_eq!(status, StatusCode::CREATED);
        let id = body["session_id"].as_str().unwrap().to_string();
        let project = delivery_project();
        let (_, log) = call(app, Method::GET, &format!("/api/sessions/{id}/export"), None).await;
        let log = parse_log(std::str::from_utf8(&log).unwrap()).unwrap();
        let state = replay(&log, &project).unwrap();
        let now = state.last_wall_time;
        Self {
            app: app.clone(),
            project,
            id,
            state,
            now,
        }
    }

    pub async fn post(&self, event: &SessionEvent) -> (StatusCode, Value) {
        post_json(
            &self.app,
            &format!("/api/sessions/{}/events", self.id),
            format_event(event),
        )
        .await
    }

    /// Applies an input locally; returns false if the engine rejects it.
    pub async fn act(&mut self, input: ViewerInput, advance_ms: i64) -> bool {
        self.now = Timestamp(self.now.0 + advance_ms);
        let Ok(t) = self.state.apply_input(&self.project, &input, &self.now) else {
            return false;
        };
        if let Some(first) = t.events.first() {
            let (status, body) = self.post(first).await;
            assert_eq!(status, StatusCode::OK, "{body}");
            assert_eq!(body["seq"], first.seq);
            let echoed: Vec<EventRecord> = serde_json::from_value(body["events"].clone()).unwrap();
            let expected: Vec<EventRecord> = t.events.iter().map(EventRecord::from).collect();
            assert_eq!(echoed, expected);
        }
        self.state = t.state;
        true
    }

    pub async fn snapshot(&self) -> Value {
        let (status, body) =
            get_json(&self.app, &format!("/api/sessions/{}/snapshot", self.id)).await;
        assert_eq!(status, StatusCode::OK);
        body
    }

    pub async fn finish_scene(&mut self) {
        let node = self.project.node(&self.state.current_node).unwrap();
        let left = node.duration_ms() - self.state.playhead_ms;
        assert!(self.act(ViewerInput::Tick { elapsed_ms: left }, left as i64).await);
        assert!(self.act(ViewerInput::SceneFinished, 0).await);
    }
}

