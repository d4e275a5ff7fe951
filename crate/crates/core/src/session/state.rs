use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;

use super::event::Playhead;
use crate::graph::{Annotation, Node, VideoProject};
use crate::{AnnotationId, NodeId, OptionId, SessionId, Timestamp};

/// Source of wall-clock time for emitted events.
pub trait Clock {
    fn now(&self) -> Timestamp;
}

impl Clock for Timestamp {
    fn now(&self) -> Timestamp {
        *self
    }
}

/// What the player falls back to after a transient overlay closes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ResumeMode {
    Playing,
    PausedByUser,
}

impl From<ResumeMode> for Mode {
    fn from(resume: ResumeMode) -> Self {
        match resume {
            ResumeMode::Playing => Mode::Playing,
            ResumeMode::PausedByUser => Mode::PausedByUser,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Mode {
    Playing,
    PausedByUser,
    PausedQuestion(NodeId),
    PausedQuestionFeedback { node: NodeId, chosen_index: usize },
    AwaitingFork(NodeId),
    OverviewOpen { resume: ResumeMode },
    AnnotationExpanded { annotation: AnnotationId, resume: ResumeMode },
    Ended,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Playing => "playing",
            Mode::PausedByUser => "paused_by_user",
            Mode::PausedQuestion(_) => "paused_question",
            Mode::PausedQuestionFeedback { .. } => "paused_question_feedback",
            Mode::AwaitingFork(_) => "awaiting_fork",
            Mode::OverviewOpen { .. } => "overview_open",
            Mode::AnnotationExpanded { .. } => "annotation_expanded",
            Mode::Ended => "ended",
        }
    }

    /// Modes in which the video is held by an overlay rather than the viewer.
    pub fn is_overlay_pause(&self) -> bool {
        matches!(
            self,
            Mode::PausedQuestion(_)
                | Mode::PausedQuestionFeedback { .. }
                | Mode::AwaitingFork(_)
                | Mode::OverviewOpen { .. }
                | Mode::AnnotationExpanded { .. }
        )
    }

    /// A question or fork is waiting for the viewer.
    pub fn is_mandatory(&self) -> bool {
        matches!(self, Mode::PausedQuestion(_) | Mode::AwaitingFork(_))
    }

    pub(crate) fn resumable(&self) -> Option<ResumeMode> {
        match self {
            Mode::Playing => Some(ResumeMode::Playing),
            Mode::PausedByUser => Some(ResumeMode::PausedByUser),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnswerRecord {
    pub chosen_index: usize,
    pub correct: bool,
    pub seq: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForkChoice {
    pub fork: NodeId,
    pub option: OptionId,
    pub seq: u64,
    /// First choice at this fork in the session.
    pub first_pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommentRecord {
    pub text: String,
    pub playhead: Playhead,
    pub created_at: Timestamp,
    pub seq: u64,
}

/// Result of answering a question. `correct_index` is only revealed here,
/// after the answer was submitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Feedback {
    pub correct_index: usize,
    pub chosen_index: usize,
    pub counts_for_metrics: bool,
}

/// Playback state of one viewer's session.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionState {
    pub session_id: SessionId,
    pub project_id: String,
    pub viewer_id: String,
    pub mode: Mode,
    pub current_node: NodeId,
    pub playhead_ms: u64,
    pub annotations_visible: bool,
    /// First answer per question; later answers never replace it.
    pub answered: BTreeMap<NodeId, AnswerRecord>,
    pub forks_taken: Vec<ForkChoice>,
    pub branch_paths_seen: BTreeSet<(NodeId, OptionId)>,
    pub viewer_annotations: Vec<Annotation>,
    pub comments: Vec<CommentRecord>,
    pub next_seq: u64,
    pub started_at: Timestamp,
    pub last_wall_time: Timestamp,
    pub ended_at: Option<Timestamp>,
    /// Playing-mode time accumulated up to the last mode change.
    pub(crate) active_ms: u64,
    pub(crate) playing_since: Option<Timestamp>,
    pub(crate) optional_interactions: u64,
}

impl SessionState {
    pub fn playhead(&self) -> Playhead {
        Playhead {
            node: self.current_node.clone(),
            offset_ms: self.playhead_ms,
        }
    }

    pub fn is_ended(&self) -> bool {
        self.mode == Mode::Ended
    }

    /// Creator and viewer annotations anchored to the current node.
    pub fn annotations_here<'a>(
        &'a self,
        project: &'a VideoProject,
    ) -> impl Iterator<Item = &'a Annotation> + 'a {
        project
            .annotations
            .iter()
            .chain(&self.viewer_annotations)
            .filter(move |a| a.anchor.node == self.current_node)
    }

    /// Whether the annotation toggle is enabled at the current node.
    pub fn annotations_available(&self, project: &VideoProject) -> bool {
        self.annotations_here(project).next().is_some()
    }

    pub fn find_annotation<'a>(
        &'a self,
        project: &'a VideoProject,
        id: &AnnotationId,
    ) -> Option<&'a Annotation> {
        project
            .annotation(id)
            .or_else(|| self.viewer_annotations.iter().find(|a| &a.annotation_id == id))
    }

    pub fn fork_satisfied(&self, fork: &NodeId) -> bool {
        self.forks_taken.iter().any(|c| &c.fork == fork)
    }

    /// Nodes the viewer may jump to: everything reachable from the start
    /// without crossing a fork through an option not yet chosen.
    pub fn unlocked_nodes<'a>(&self, project: &'a VideoProject) -> BTreeSet<&'a NodeId> {
        let mut seen = BTreeSet::new();
        let Some((start, _)) = project.nodes.get_key_value(&project.start_node) else {
            return seen;
        };
        seen.insert(start);
        let mut queue = VecDeque::from([start]);
        while let Some(id) = queue.pop_front() {
            let node = &project.nodes[id];
            let next: Vec<&NodeId> = match node {
                Node::Fork(fork) => fork
                    .options
                    .iter()
                    .filter(|o| {
                        self.branch_paths_seen
                            .contains(&(id.clone(), o.option_id.clone()))
                    })
                    .map(|o| &o.target)
                    .collect(),
                other => other.successors().collect(),
            };
            for n in next {
                if let Some((key, _)) = project.nodes.get_key_value(n) {
                    if seen.insert(key) {
                        queue.push_back(key);
                    }
                }
            }
        }
        seen
    }

    /// Playing-mode time up to the last recorded event.
    pub fn active_time_ms(&self) -> u64 {
        self.active_ms
            + self
                .playing_since
                .map_or(0, |since| self.last_wall_time.millis_since(since))
    }

    pub fn time_spent_ms(&self) -> u64 {
        self.ended_at
            .unwrap_or(self.last_wall_time)
            .millis_since(self.started_at)
    }
}
