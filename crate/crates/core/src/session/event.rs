use alloc::string::String;

use crate::graph::{AnchorRange, Annotation, BodyItem};
use crate::{AnnotationId, NodeId, OptionId, Timestamp};
use alloc::vec::Vec;

/// Position in the graph: a node and an offset into its media.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Playhead {
    pub node: NodeId,
    pub offset_ms: u64,
}

impl Playhead {
    pub fn new(node: impl Into<NodeId>, offset_ms: u64) -> Self {
        Self {
            node: node.into(),
            offset_ms,
        }
    }
}

/// One entry of a session log. `playhead` is the position right after the
/// event took effect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionEvent {
    pub seq: u64,
    pub wall_time: Timestamp,
    pub playhead: Playhead,
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EventKind {
    SessionStarted {
        session_id: String,
        project_id: String,
        viewer_id: String,
    },
    PlaybackResumed,
    PlaybackPaused,
    SceneEntered(NodeId),
    QuestionPresented(NodeId),
    QuestionAnswered {
        node: NodeId,
        chosen_index: usize,
        correct: bool,
    },
    ForkPresented(NodeId),
    ChoosePath {
        node: NodeId,
        option: OptionId,
    },
    OverviewOpened,
    OverviewNavigated(NodeId),
    OverviewClosed,
    AnnotationsShown,
    AnnotationsHidden,
    AnnotationExpanded(AnnotationId),
    AnnotationCollapsed(AnnotationId),
    ViewerAnnotationAdded(Annotation),
    CommentAdded(String),
    Seeked {
        from: Playhead,
        to: Playhead,
    },
    SessionEnded,
}

impl EventKind {
    /// Stable snake_case name, used as the `kind` field on disk.
    pub fn name(&self) -> &'static str {
        match self {
            EventKind::SessionStarted { .. } => "session_started",
            EventKind::PlaybackResumed => "playback_resumed",
            EventKind::PlaybackPaused => "playback_paused",
            EventKind::SceneEntered(_) => "scene_entered",
            EventKind::QuestionPresented(_) => "question_presented",
            EventKind::QuestionAnswered { .. } => "question_answered",
            EventKind::ForkPresented(_) => "fork_presented",
            EventKind::ChoosePath { .. } => "choose_path",
            EventKind::OverviewOpened => "overview_opened",
            EventKind::OverviewNavigated(_) => "overview_navigated",
            EventKind::OverviewClosed => "overview_closed",
            EventKind::AnnotationsShown => "annotations_shown",
            EventKind::AnnotationsHidden => "annotations_hidden",
            EventKind::AnnotationExpanded(_) => "annotation_expanded",
            EventKind::AnnotationCollapsed(_) => "annotation_collapsed",
            EventKind::ViewerAnnotationAdded(_) => "viewer_annotation_added",
            EventKind::CommentAdded(_) => "comment_added",
            EventKind::Seeked { .. } => "seeked",
            EventKind::SessionEnded => "session_ended",
        }
    }

    /// Events emitted when playback arrives at a node.
    pub fn is_node_entry(&self) -> bool {
        matches!(
            self,
            EventKind::SceneEntered(_)
                | EventKind::QuestionPresented(_)
                | EventKind::ForkPresented(_)
                | EventKind::SessionEnded
        )
    }
}

/// A viewer annotation as submitted, before the engine stamps it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationDraft {
    pub annotation_id: AnnotationId,
    pub anchor: AnchorRange,
    pub title: String,
    pub body: Vec<BodyItem>,
}

impl From<&Annotation> for AnnotationDraft {
    fn from(a: &Annotation) -> Self {
        Self {
            annotation_id: a.annotation_id.clone(),
            anchor: a.anchor.clone(),
            title: a.title.clone(),
            body: a.body.clone(),
        }
    }
}

/// Something the viewer (or the player, for `Tick` and `SceneFinished`) does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViewerInput {
    /// Media time advanced while playing. Never logged.
    Tick { elapsed_ms: u64 },
    /// The current scene's segment played to its end.
    SceneFinished,
    Pause,
    Play,
    Answer { chosen_index: usize },
    /// Dismisses answer feedback and continues.
    Acknowledge,
    ChoosePath { option: OptionId },
    OpenOverview,
    CloseOverview,
    Navigate { target: NodeId },
    ToggleAnnotations,
    ExpandAnnotation { annotation: AnnotationId },
    CollapseAnnotation,
    AddViewerAnnotation(AnnotationDraft),
    AddComment { text: String },
    Seek { to: Playhead },
}

impl ViewerInput {
    pub fn name(&self) -> &'static str {
        match self {
            ViewerInput::Tick { .. } => "tick",
            ViewerInput::SceneFinished => "scene_finished",
            ViewerInput::Pause => "pause",
            ViewerInput::Play => "play",
            ViewerInput::Answer { .. } => "answer",
            ViewerInput::Acknowledge => "acknowledge",
            ViewerInput::ChoosePath { .. } => "choose_path",
            ViewerInput::OpenOverview => "open_overview",
            ViewerInput::CloseOverview => "close_overview",
            ViewerInput::Navigate { .. } => "navigate",
            ViewerInput::ToggleAnnotations => "toggle_annotations",
            ViewerInput::ExpandAnnotation { .. } => "expand_annotation",
            ViewerInput::CollapseAnnotation => "collapse_annotation",
            ViewerInput::AddViewerAnnotation(_) => "add_viewer_annotation",
            ViewerInput::AddComment { .. } => "add_comment",
            ViewerInput::Seek { .. } => "seek",
        }
    }
}
