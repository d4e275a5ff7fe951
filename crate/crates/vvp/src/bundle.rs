//! The `.vvx` export bundle: every session of a project with its full log,
//! metrics and choices, plus per-question and per-fork tallies.

use serde::Serialize;
use serde_json::Value;
use vvp_core::analytics::{build_bundle, ExportBundle};
use vvp_core::graph::VideoProject;
use vvp_core::session::{CorruptLog, SessionLog, SessionMetrics};

use crate::document::to_canonical;
use crate::time::{format_timestamp, rfc3339};
use crate::wire::{AnnotationDto, EventRecord, PlayheadDto};

pub const EXTENSION: &str = "vvx";

#[derive(Debug, Serialize)]
pub struct MetricsDto {
    pub correct_answers: u64,
    pub questions_available: u64,
    pub correct_ratio: f64,
    pub time_spent_ms: u64,
    pub active_time_ms: u64,
    pub optional_interactions: u64,
    pub branch_paths_seen: u64,
    pub comments: u64,
}

impl From<&SessionMetrics> for MetricsDto {
    fn from(m: &SessionMetrics) -> Self {
        Self {
            correct_answers: m.correct_answers,
            questions_available: m.questions_available,
            correct_ratio: m.correct_ratio(),
            time_spent_ms: m.time_spent_ms,
            active_time_ms: m.active_time_ms,
            optional_interactions: m.optional_interactions,
            branch_paths_seen: m.branch_paths_seen,
            comments: m.comments,
        }
    }
}

#[derive(Serialize)]
struct CommentDto {
    text: String,
    playhead: PlayheadDto,
    #[serde(with = "rfc3339")]
    created_at: vvp_core::Timestamp,
    seq: u64,
}

#[derive(Serialize)]
struct ForkChoiceDto {
    fork: String,
    option: String,
    seq: u64,
    first_pass: bool,
}

#[derive(Serialize)]
struct SessionDto {
    session_id: String,
    viewer_id: String,
    metrics: MetricsDto,
    events: Vec<EventRecord>,
    viewer_annotations: Vec<AnnotationDto>,
    comments: Vec<CommentDto>,
    fork_choices: Vec<ForkChoiceDto>,
}

#[derive(Serialize)]
struct QuestionTallyDto {
    question: String,
    correct_index: usize,
    choices: Vec<u64>,
    answered: u64,
    correct: u64,
}

#[derive(Serialize)]
struct OptionTallyDto {
    option: String,
    first_pass: u64,
    total: u64,
}

#[derive(Serialize)]
struct ForkTallyDto {
    fork: String,
    options: Vec<OptionTallyDto>,
}

#[derive(Serialize)]
struct BundleDto {
    project_id: String,
    generated_at: Option<String>,
    sessions: Vec<SessionDto>,
    question_tallies: Vec<QuestionTallyDto>,
    fork_tallies: Vec<ForkTallyDto>,
}

pub fn bundle_value(bundle: &ExportBundle) -> Value {
    let dto = BundleDto {
        project_id: bundle.project_id.clone(),
        generated_at: bundle.generated_at.map(format_timestamp),
        sessions: bundle
            .sessions
            .iter()
            .map(|s| SessionDto {
                session_id: s.session_id.clone(),
                viewer_id: s.viewer_id.clone(),
                metrics: (&s.metrics).into(),
                events: s.events.iter().map(Into::into).collect(),
                viewer_annotations: s.viewer_annotations.iter().map(Into::into).collect(),
                comments: s
                    .comments
                    .iter()
                    .map(|c| CommentDto {
                        text: c.text.clone(),
                        playhead: (&c.playhead).into(),
                        created_at: c.created_at,
                        seq: c.seq,
                    })
                    .collect(),
                fork_choices: s
                    .fork_choices
                    .iter()
                    .map(|c| ForkChoiceDto {
                        fork: c.fork.to_string(),
                        option: c.option.to_string(),
                        seq: c.seq,
                        first_pass: c.first_pass,
                    })
                    .collect(),
            })
            .collect(),
        question_tallies: bundle
            .question_tallies
            .iter()
            .map(|q| QuestionTallyDto {
                question: q.question.to_string(),
                correct_index: q.correct_index,
                choices: q.choices.clone(),
                answered: q.answered,
                correct: q.correct,
            })
            .collect(),
        fork_tallies: bundle
            .fork_tallies
            .iter()
            .map(|f| ForkTallyDto {
                fork: f.fork.to_string(),
                options: f
                    .options
                    .iter()
                    .map(|o| OptionTallyDto {
                        option: o.option.to_string(),
                        first_pass: o.first_pass,
                        total: o.total,
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_value(dto).expect("bundle serializes")
}

/// Canonical bundle bytes for the given logs.
pub fn export_bundle(project: &VideoProject, logs: &[SessionLog]) -> Result<String, CorruptLog> {
    let bundle = build_bundle(project, logs)?;
    Ok(to_canonical(&bundle_value(&bundle)))
}
