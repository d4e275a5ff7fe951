//! On-disk persistence and the in-memory mirror of every session.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use tokio::sync::Mutex;
use vvp_core::graph::VideoProject;
use vvp_core::session::{
    replay, start_session, IngestError, SessionEvent, SessionLog, SessionState, ViewerInput,
};
use vvp_core::{SessionId, Timestamp};

use crate::document::{self, parse_project};
use crate::logfile::{self, append_events, read_log};

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("data directory {0} does not exist")]
    MissingDataDir(PathBuf),
    #[error("{path}: {message}")]
    Load { path: PathBuf, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn load_error(path: &Path, message: impl ToString) -> StoreError {
    StoreError::Load {
        path: path.to_path_buf(),
        message: message.to_string(),
    }
}

pub struct StoredProject {
    pub project: VideoProject,
    /// Directory that relative media URIs resolve against.
    pub media_root: PathBuf,
    pub playable: bool,
}

pub struct StoredSession {
    pub project: Arc<StoredProject>,
    pub state: SessionState,
    pub events: Vec<SessionEvent>,
    file: File,
}

impl StoredSession {
    pub fn log(&self) -> SessionLog {
        SessionLog::new(self.events.clone())
    }

    /// Persists the events, then advances the mirror.
    fn commit(&mut self, state: SessionState, events: &[SessionEvent]) -> io::Result<()> {
        append_events(&mut self.file, events)?;
        self.events.extend_from_slice(events);
        self.state = state;
        Ok(())
    }

    /// Validates a client event against the engine and makes it durable.
    /// Returns every event the engine emitted, starting with the submitted
    /// one.
    pub fn ingest(&mut self, event: &SessionEvent) -> Result<Vec<SessionEvent>, IngestFailure> {
        let transition = self.state.ingest(&self.project.project, event)?;
        self.commit(transition.state, &transition.events)?;
        Ok(transition.events)
    }

    /// Applies an input stamped with the server clock.
    pub fn apply(
        &mut self,
        input: &ViewerInput,
        now: Timestamp,
    ) -> Result<Vec<SessionEvent>, IngestFailure> {
        if self.state.is_ended() {
            return Err(IngestError::SessionEnded.into());
        }
        let transition = self
            .state
            .apply_input(&self.project.project, input, &now)
            .map_err(IngestError::from)?;
        self.commit(transition.state, &transition.events)?;
        Ok(transition.events)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum IngestFailure {
    #[error(transparent)]
    Rejected(#[from] IngestError),
    #[error("could not persist events: {0}")]
    Io(#[from] io::Error),
}

#[derive(Debug, thiserror::Error)]
pub enum CreateError {
    #[error("unknown project {0}")]
    UnknownProject(String),
    #[error(transparent)]
    Rejected(#[from] vvp_core::session::EngineError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub struct Store {
    sessions_dir: PathBuf,
    projects: BTreeMap<String, Arc<StoredProject>>,
    sessions: RwLock<BTreeMap<String, Arc<Mutex<StoredSession>>>>,
}

fn files_with_extension(dir: &Path, ext: &str) -> io::Result<Vec<PathBuf>> {
    if !dir.is_dir() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == ext) {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

impl Store {
    /// Loads `projects/*.vvp` and replays `sessions/*.vvlog` under
    /// `data_dir`.
    pub fn open(data_dir: &Path) -> Result<Self, StoreError> {
        if !data_dir.is_dir() {
            return Err(StoreError::MissingDataDir(data_dir.to_path_buf()));
        }
        let projects_dir = data_dir.join("projects");
        let sessions_dir = data_dir.join("sessions");
        std::fs::create_dir_all(&sessions_dir)?;

        let mut projects = BTreeMap::new();
        for path in files_with_extension(&projects_dir, document::EXTENSION)? {
            let parsed = parse_project(&std::fs::read(&path)?).map_err(|e| load_error(&path, e))?;
            let id = parsed.project.id.clone();
            let stored = StoredProject {
                playable: parsed.report.is_playable(),
                project: parsed.project,
                media_root: projects_dir.clone(),
            };
            if projects.insert(id.clone(), Arc::new(stored)).is_some() {
                return Err(load_error(&path, format!("duplicate project id {id}")));
            }
        }

        let mut sessions = BTreeMap::new();
        for path in files_with_extension(&sessions_dir, logfile::EXTENSION)? {
            let log = read_log(&path).map_err(|e| load_error(&path, e))?;
            let project_id = log.project_id().unwrap_or_default();
            let project: &Arc<StoredProject> = projects
                .get(project_id)
                .ok_or_else(|| load_error(&path, format!("unknown project {project_id}")))?;
            let state = replay(&log, &project.project)
                .map_err(|e| load_error(&path, format!("seq {}: {}", e.seq, e.reason)))?;
            let file = OpenOptions::new().append(true).open(&path)?;
            let session = StoredSession {
                project: Arc::clone(project),
                state,
                events: log.events,
                file,
            };
            sessions.insert(session.state.session_id.0.clone(), Arc::new(Mutex::new(session)));
        }

        Ok(Self {
            sessions_dir,
            projects,
            sessions: RwLock::new(sessions),
        })
    }

    pub fn projects(&self) -> impl Iterator<Item = &Arc<StoredProject>> {
        self.projects.values()
    }

    pub fn project(&self, id: &str) -> Option<&Arc<StoredProject>> {
        self.projects.get(id)
    }

    pub fn session(&self, id: &str) -> Option<Arc<Mutex<StoredSession>>> {
        self.sessions.read().expect("session map").get(id).cloned()
    }

    /// Consistent snapshots of every log belonging to a project.
    pub async fn project_logs(&self, project_id: &str) -> Vec<SessionLog> {
        let all: Vec<_> = self
            .sessions
            .read()
            .expect("session map")
            .values()
            .cloned()
            .collect();
        let mut logs = Vec::new();
        for session in all {
            let session = session.lock().await;
            if session.state.project_id == project_id {
                logs.push(session.log());
            }
        }
        logs
    }

    pub fn create_session(
        &self,
        project_id: &str,
        viewer_id: &str,
        now: Timestamp,
    ) -> Result<String, CreateError> {
        let project = self
            .project(project_id)
            .ok_or_else(|| CreateError::UnknownProject(project_id.to_string()))?;
        let id = uuid::Uuid::new_v4().to_string();
        let transition =
            start_session(&project.project, SessionId::new(id.clone()), viewer_id, &now)?;
        let path = self
            .sessions_dir
            .join(format!("{id}.{}", logfile::EXTENSION));
        let mut file = OpenOptions::new().append(true).create_new(true).open(path)?;
        append_events(&mut file, &transition.events)?;
        let session = StoredSession {
            project: Arc::clone(project),
            state: transition.state,
            events: transition.events,
            file,
        };
        self.sessions
            .write()
            .expect("session map")
            .insert(id.clone(), Arc::new(Mutex::new(session)));
        Ok(id)
    }
}
