//! Per-viewer playback sessions: the state machine, its append-only event
//! log, interaction classification, replay and per-session metrics.

mod classify;
mod engine;
mod event;
mod log;
mod state;

use alloc::string::String;

use crate::{AnnotationId, NodeId, OptionId};

pub use classify::{classify_interaction, InteractionClass};
pub use engine::{start_session, Transition};
pub use event::{AnnotationDraft, EventKind, Playhead, SessionEvent, ViewerInput};
pub use log::{replay, session_metrics, CorruptLog, IngestError, SessionLog, SessionMetrics};
pub use state::{
    AnswerRecord, Clock, CommentRecord, Feedback, ForkChoice, Mode, ResumeMode, SessionState,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("project has {errors} validation error(s)")]
    InvalidProject { errors: usize },
    #[error("input {input} is not allowed in mode {mode}")]
    IllegalTransition {
        mode: &'static str,
        input: &'static str,
    },
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("fork has no option {0}")]
    UnknownOption(OptionId),
    #[error("unknown annotation {0}")]
    UnknownAnnotation(AnnotationId),
    #[error("annotation {0} is not shown at the playhead")]
    AnnotationNotShown(AnnotationId),
    #[error("no annotations are available here")]
    AnnotationsUnavailable,
    #[error("answer {index} out of range for {choices} choices")]
    AnswerOutOfRange { index: usize, choices: usize },
    #[error("cannot move to {node}: {reason}")]
    InvalidTarget { node: NodeId, reason: &'static str },
    #[error("invalid viewer annotation: {0}")]
    InvalidAnnotation(String),
    #[error("comment text is empty")]
    EmptyComment,
}
