use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Annotation, Node, VideoProject};
use crate::session::{
    replay, session_metrics, CommentRecord, CorruptLog, ForkChoice, SessionEvent, SessionLog,
    SessionMetrics,
};
use crate::{NodeId, OptionId, Timestamp};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionExport {
    pub session_id: String,
    pub viewer_id: String,
    pub events: Vec<SessionEvent>,
    pub metrics: SessionMetrics,
    pub viewer_annotations: Vec<Annotation>,
    pub comments: Vec<CommentRecord>,
    pub fork_choices: Vec<ForkChoice>,
}

/// Counting (first) answers per question. `choices[i]` is how many sessions
/// picked choice `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuestionTally {
    pub question: NodeId,
    pub correct_index: usize,
    pub choices: Vec<u64>,
    pub answered: u64,
    pub correct: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptionTally {
    pub option: OptionId,
    pub first_pass: u64,
    pub total: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForkTally {
    pub fork: NodeId,
    pub options: Vec<OptionTally>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExportBundle {
    pub project_id: String,
    /// Latest event time across all sessions, so the bundle is a pure
    /// function of its logs.
    pub generated_at: Option<Timestamp>,
    pub sessions: Vec<SessionExport>,
    pub question_tallies: Vec<QuestionTally>,
    pub fork_tallies: Vec<ForkTally>,
}

/// Replays every log and collects sessions (ordered by session id) with
/// per-question and per-fork tallies.
pub fn build_bundle(project: &VideoProject, logs: &[SessionLog]) -> Result<ExportBundle, CorruptLog> {
    let states: Vec<_> = logs
        .iter()
        .map(|log| replay(log, project))
        .collect::<Result<_, _>>()?;
    let mut sessions = Vec::with_capacity(logs.len());
    for (log, state) in logs.iter().zip(&states) {
        sessions.push(SessionExport {
            session_id: state.session_id.as_str().into(),
            viewer_id: state.viewer_id.clone(),
            events: log.events.clone(),
            metrics: session_metrics(log, project)?,
            viewer_annotations: state.viewer_annotations.clone(),
            comments: state.comments.clone(),
            fork_choices: state.forks_taken.clone(),
        });
    }
    sessions.sort_by(|a, b| a.session_id.cmp(&b.session_id));

    let mut answers: BTreeMap<&NodeId, Vec<(usize, bool)>> = BTreeMap::new();
    let mut choices: BTreeMap<(&NodeId, &OptionId), (u64, u64)> = BTreeMap::new();
    for session in &sessions {
        for choice in &session.fork_choices {
            let entry = choices.entry((&choice.fork, &choice.option)).or_default();
            entry.1 += 1;
            if choice.first_pass {
                entry.0 += 1;
            }
        }
    }
    for state in &states {
        for (question, record) in &state.answered {
            answers
                .entry(question)
                .or_default()
                .push((record.chosen_index, record.correct));
        }
    }

    let mut question_tallies = Vec::new();
    let mut fork_tallies = Vec::new();
    for (id, node) in &project.nodes {
        match node {
            Node::Question(q) => {
                let mut tally = QuestionTally {
                    question: id.clone(),
                    correct_index: q.correct_index,
                    choices: vec![0; q.choices.len()],
                    answered: 0,
                    correct: 0,
                };
                for &(chosen, correct) in answers.get(id).into_iter().flatten() {
                    if let Some(slot) = tally.choices.get_mut(chosen) {
                        *slot += 1;
                    }
                    tally.answered += 1;
                    tally.correct += correct as u64;
                }
                question_tallies.push(tally);
            }
            Node::Fork(f) => fork_tallies.push(ForkTally {
                fork: id.clone(),
                options: f
                    .options
                    .iter()
                    .map(|o| {
                        let (first_pass, total) =
                            choices.get(&(id, &o.option_id)).copied().unwrap_or_default();
                        OptionTally {
                            option: o.option_id.clone(),
                            first_pass,
                            total,
                        }
                    })
                    .collect(),
            }),
            _ => {}
        }
    }

    let generated_at = logs
        .iter()
        .filter_map(|log| log.events.last())
        .map(|e| e.wall_time)
        .max();
    Ok(ExportBundle {
        project_id: project.id.clone(),
        generated_at,
        sessions,
        question_tallies,
        fork_tallies,
    })
}
