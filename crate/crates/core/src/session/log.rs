//! Session logs: ingestion of individual events, full replay, and the
//! per-session metrics derived from a log.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::engine::{describe, input_for_event, start_session, Transition};
use super::event::{EventKind, SessionEvent, ViewerInput};
use super::state::{Mode, SessionState};
use super::EngineError;
use crate::graph::VideoProject;
use crate::SessionId;

/// The gap-free, sequence-numbered record of one viewer's session.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SessionLog {
    pub events: Vec<SessionEvent>,
}

impl SessionLog {
    pub fn new(events: Vec<SessionEvent>) -> Self {
        Self { events }
    }

    fn started(&self) -> Option<(&str, &str, &str)> {
        match &self.events.first()?.kind {
            EventKind::SessionStarted {
                session_id,
                project_id,
                viewer_id,
            } => Some((session_id, project_id, viewer_id)),
            _ => None,
        }
    }

    pub fn session_id(&self) -> Option<&str> {
        self.started().map(|s| s.0)
    }

    pub fn project_id(&self) -> Option<&str> {
        self.started().map(|s| s.1)
    }

    pub fn viewer_id(&self) -> Option<&str> {
        self.started().map(|s| s.2)
    }
}

impl From<Vec<SessionEvent>> for SessionLog {
    fn from(events: Vec<SessionEvent>) -> Self {
        Self { events }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("corrupt session log at seq {seq}: {reason}")]
pub struct CorruptLog {
    pub seq: u64,
    pub reason: String,
}

impl CorruptLog {
    fn new(seq: u64, reason: impl Into<String>) -> Self {
        Self {
            seq,
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IngestError {
    #[error("expected seq {expected}, got {got}")]
    SequenceConflict { expected: u64, got: u64 },
    #[error("session has ended")]
    SessionEnded,
    #[error(transparent)]
    Rejected(#[from] EngineError),
    #[error("event does not match the engine: {0}")]
    Mismatch(String),
}

impl SessionState {
    /// Applies a client-submitted event. The event must be exactly the
    /// first event the engine emits for the corresponding input; the
    /// returned transition also carries any follow-up events (e.g. the
    /// scene entered after a path choice).
    pub fn ingest(
        &self,
        project: &VideoProject,
        event: &SessionEvent,
    ) -> Result<Transition, IngestError> {
        if self.mode == Mode::Ended {
            return Err(IngestError::SessionEnded);
        }
        if event.seq != self.next_seq {
            return Err(IngestError::SequenceConflict {
                expected: self.next_seq,
                got: event.seq,
            });
        }
        let (input, reached) = input_for_event(self, event).ok_or_else(|| {
            IngestError::Mismatch(format!(
                "{} cannot happen in mode {}",
                describe(&event.kind),
                self.mode.name()
            ))
        })?;

        // Playback position is not logged while playing; catch up to where
        // the event says the viewer was.
        let mut base = self;
        let caught_up;
        if let Some(offset) = reached {
            if self.mode == Mode::Playing && offset > self.playhead_ms {
                let tick = ViewerInput::Tick {
                    elapsed_ms: offset - self.playhead_ms,
                };
                caught_up = self.apply_input(project, &tick, &event.wall_time)?.state;
                base = &caught_up;
            }
        }

        let transition = base.apply_input(project, &input, &event.wall_time)?;
        match transition.events.first() {
            Some(first) if first == event => Ok(transition),
            Some(first) => Err(IngestError::Mismatch(format!(
                "engine produced {} at {}@{}ms, event says {} at {}@{}ms",
                describe(&first.kind),
                first.playhead.node,
                first.playhead.offset_ms,
                describe(&event.kind),
                event.playhead.node,
                event.playhead.offset_ms
            ))),
            None => Err(IngestError::Mismatch("input produced no event".to_owned())),
        }
    }

    /// Metrics tracked incrementally while the session ran.
    pub fn metrics(&self, project: &VideoProject) -> SessionMetrics {
        SessionMetrics {
            correct_answers: self.answered.values().filter(|a| a.correct).count() as u64,
            questions_available: project.question_count() as u64,
            time_spent_ms: self.time_spent_ms(),
            active_time_ms: self.active_time_ms(),
            optional_interactions: self.optional_interactions,
            branch_paths_seen: self.branch_paths_seen.len() as u64,
            comments: self.comments.len() as u64,
        }
    }
}

fn check_prefix(expected: &[SessionEvent], log: &[SessionEvent]) -> Result<(), CorruptLog> {
    for (i, produced) in expected.iter().enumerate() {
        match log.get(i) {
            None => {
                return Err(CorruptLog::new(
                    produced.seq,
                    format!("log ends before {}", describe(&produced.kind)),
                ))
            }
            Some(logged) if logged != produced => {
                return Err(CorruptLog::new(
                    logged.seq,
                    format!(
                        "expected {} but log has {}",
                        describe(&produced.kind),
                        describe(&logged.kind)
                    ),
                ))
            }
            Some(_) => {}
        }
    }
    Ok(())
}

/// Re-runs the state machine over a log, verifying every event.
pub fn replay(log: &SessionLog, project: &VideoProject) -> Result<SessionState, CorruptLog> {
    let events = &log.events;
    let first = events
        .first()
        .ok_or_else(|| CorruptLog::new(0, "log is empty"))?;
    if first.seq != 0 {
        return Err(CorruptLog::new(first.seq, "log does not start at seq 0"));
    }
    let EventKind::SessionStarted {
        session_id,
        project_id,
        viewer_id,
    } = &first.kind
    else {
        return Err(CorruptLog::new(0, "first event is not session_started"));
    };
    if project_id != &project.id {
        return Err(CorruptLog::new(
            0,
            format!("log belongs to project {project_id}, not {}", project.id),
        ));
    }
    let started = start_session(
        project,
        SessionId::new(session_id.clone()),
        viewer_id,
        &first.wall_time,
    )
    .map_err(|e| CorruptLog::new(0, format!("{e}")))?;
    check_prefix(&started.events, events)?;

    let mut state = started.state;
    let mut i = started.events.len();
    while i < events.len() {
        let event = &events[i];
        let transition = state
            .ingest(project, event)
            .map_err(|e| CorruptLog::new(event.seq, format!("{e}")))?;
        check_prefix(&transition.events[1..], &events[i + 1..])?;
        i += transition.events.len();
        state = transition.state;
    }
    Ok(state)
}

/// Per-session dependent variables.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct SessionMetrics {
    pub correct_answers: u64,
    /// Every question in the project, reachable on the viewer's path or not.
    pub questions_available: u64,
    /// Wall-clock span from session start to end (or the last event).
    pub time_spent_ms: u64,
    /// Time spent in playing mode.
    pub active_time_ms: u64,
    pub optional_interactions: u64,
    pub branch_paths_seen: u64,
    pub comments: u64,
}

impl SessionMetrics {
    /// Correct answers relative to all questions of the project.
    pub fn correct_ratio(&self) -> f64 {
        if self.questions_available == 0 {
            0.0
        } else {
            self.correct_answers as f64 / self.questions_available as f64
        }
    }
}

/// Metrics counted directly from the log's events. The log is replayed
/// first so corrupt logs are rejected; only active time is taken from the
/// replayed state, since it depends on the mode at every instant.
pub fn session_metrics(
    log: &SessionLog,
    project: &VideoProject,
) -> Result<SessionMetrics, CorruptLog> {
    let state = replay(log, project)?;
    let events = &log.events;

    let mut first_answers = BTreeSet::new();
    let mut correct_answers = 0;
    let mut forks_seen = BTreeSet::new();
    let mut paths_seen = BTreeSet::new();
    let mut optional_interactions = 0;
    let mut comments = 0;
    for event in events {
        match &event.kind {
            EventKind::QuestionAnswered { node, correct, .. } => {
                if first_answers.insert(node) && *correct {
                    correct_answers += 1;
                }
            }
            EventKind::ChoosePath { node, option } => {
                let additional = forks_seen.contains(node) && !paths_seen.contains(&(node, option));
                if additional {
                    optional_interactions += 1;
                }
                forks_seen.insert(node);
                paths_seen.insert((node, option));
            }
            EventKind::CommentAdded(_) => {
                comments += 1;
                optional_interactions += 1;
            }
            EventKind::AnnotationExpanded(_)
            | EventKind::OverviewNavigated(_)
            | EventKind::ViewerAnnotationAdded(_) => optional_interactions += 1,
            _ => {}
        }
    }

    let start = events[0].wall_time;
    let end = events
        .iter()
        .find(|e| e.kind == EventKind::SessionEnded)
        .or(events.last())
        .map_or(start, |e| e.wall_time);

    Ok(SessionMetrics {
        correct_answers,
        questions_available: project.question_count() as u64,
        time_spent_ms: end.millis_since(start),
        active_time_ms: state.active_time_ms(),
        optional_interactions,
        branch_paths_seen: paths_seen.len() as u64,
        comments,
    })
}
