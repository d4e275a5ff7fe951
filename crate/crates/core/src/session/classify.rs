use super::event::{EventKind, SessionEvent};
use super::state::SessionState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InteractionClass {
    /// Required to continue: answering a question, a first choice at a fork.
    Mandatory,
    /// Beyond the required flow: expanding annotations, overview jumps,
    /// watching an additional branch, adding annotations or comments.
    Optional,
    /// Playback bookkeeping.
    System,
}

impl InteractionClass {
    pub fn as_str(self) -> &'static str {
        match self {
            InteractionClass::Mandatory => "mandatory",
            InteractionClass::Optional => "optional",
            InteractionClass::System => "system",
        }
    }
}

/// Classifies `event` given the session state it was applied to.
///
/// A path choice is optional only when the fork was already answered
/// earlier in the session and the viewer picks an option they have not
/// watched yet; any other path choice is the forced decision itself.
pub fn classify_interaction(event: &SessionEvent, context: &SessionState) -> InteractionClass {
    match &event.kind {
        EventKind::AnnotationExpanded(_)
        | EventKind::OverviewNavigated(_)
        | EventKind::ViewerAnnotationAdded(_)
        | EventKind::CommentAdded(_) => InteractionClass::Optional,
        EventKind::ChoosePath { node, option } => {
            let additional = context.fork_satisfied(node)
                && !context
                    .branch_paths_seen
                    .contains(&(node.clone(), option.clone()));
            if additional {
                InteractionClass::Optional
            } else {
                InteractionClass::Mandatory
            }
        }
        EventKind::QuestionAnswered { .. } => InteractionClass::Mandatory,
        EventKind::SessionStarted { .. }
        | EventKind::PlaybackResumed
        | EventKind::PlaybackPaused
        | EventKind::SceneEntered(_)
        | EventKind::QuestionPresented(_)
        | EventKind::ForkPresented(_)
        | EventKind::OverviewOpened
        | EventKind::OverviewClosed
        | EventKind::AnnotationsShown
        | EventKind::AnnotationsHidden
        | EventKind::AnnotationCollapsed(_)
        | EventKind::Seeked { .. }
        | EventKind::SessionEnded => InteractionClass::System,
    }
}
