//! Transition function of the playback state machine.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::classify::{classify_interaction, InteractionClass};
use super::event::{AnnotationDraft, EventKind, Playhead, SessionEvent, ViewerInput};
use super::state::{
    AnswerRecord, Clock, CommentRecord, Feedback, ForkChoice, Mode, SessionState,
};
use super::EngineError;
use crate::graph::{validate_graph, Annotation, AuthorKind, Node, VideoProject};
use crate::{NodeId, SessionId, Timestamp};

/// New state plus the events the transition appended, in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub state: SessionState,
    pub events: Vec<SessionEvent>,
}

/// Mutable working copy of a state that stamps and counts emitted events.
struct Step<'p> {
    project: &'p VideoProject,
    state: SessionState,
    events: Vec<SessionEvent>,
    now: Timestamp,
}

impl<'p> Step<'p> {
    fn new(project: &'p VideoProject, state: SessionState, now: Timestamp) -> Self {
        // Wall time never runs backwards within a log.
        let now = now.max(state.last_wall_time);
        Self {
            project,
            state,
            events: Vec::new(),
            now,
        }
    }

    fn emit(&mut self, kind: EventKind) {
        let event = SessionEvent {
            seq: self.state.next_seq,
            wall_time: self.now,
            playhead: self.state.playhead(),
            kind,
        };
        if classify_interaction(&event, &self.state) == InteractionClass::Optional {
            self.state.optional_interactions += 1;
        }
        self.state.next_seq += 1;
        self.state.last_wall_time = self.now;
        self.events.push(event);
    }

    fn set_mode(&mut self, mode: Mode) {
        let was_playing = self.state.mode == Mode::Playing;
        let now_playing = mode == Mode::Playing;
        if was_playing && !now_playing {
            if let Some(since) = self.state.playing_since.take() {
                self.state.active_ms += self.now.millis_since(since);
            }
        } else if !was_playing && now_playing {
            self.state.playing_since = Some(self.now);
        }
        if mode == Mode::Ended {
            self.state.ended_at = Some(self.now);
        }
        self.state.mode = mode;
    }

    fn move_to(&mut self, node: &NodeId, offset_ms: u64) {
        self.state.current_node = node.clone();
        self.state.playhead_ms = offset_ms;
    }

    /// Arrives at `id`: scenes play, questions and forks pause, end nodes end.
    fn enter(&mut self, id: &NodeId) -> Result<(), EngineError> {
        let node = self
            .project
            .node(id)
            .ok_or_else(|| EngineError::UnknownNode(id.clone()))?;
        self.move_to(id, 0);
        match node {
            Node::Scene(_) => {
                self.set_mode(Mode::Playing);
                self.emit(EventKind::SceneEntered(id.clone()));
            }
            Node::Question(_) => {
                self.set_mode(Mode::PausedQuestion(id.clone()));
                self.emit(EventKind::QuestionPresented(id.clone()));
            }
            Node::Fork(_) => {
                self.set_mode(Mode::AwaitingFork(id.clone()));
                self.emit(EventKind::ForkPresented(id.clone()));
            }
            Node::End => {
                self.set_mode(Mode::Ended);
                self.emit(EventKind::SessionEnded);
            }
        }
        Ok(())
    }

    fn finish(self) -> Transition {
        Transition {
            state: self.state,
            events: self.events,
        }
    }
}

fn illegal(state: &SessionState, input: &ViewerInput) -> EngineError {
    EngineError::IllegalTransition {
        mode: state.mode.name(),
        input: input.name(),
    }
}

/// Opens a session at the project's start node. The project must validate
/// without errors.
pub fn start_session(
    project: &VideoProject,
    session_id: SessionId,
    viewer_id: &str,
    clock: &impl Clock,
) -> Result<Transition, EngineError> {
    let report = validate_graph(project);
    if !report.is_playable() {
        return Err(EngineError::InvalidProject {
            errors: report.errors.len(),
        });
    }
    let now = clock.now();
    let state = SessionState {
        session_id: session_id.clone(),
        project_id: project.id.clone(),
        viewer_id: viewer_id.into(),
        // Placeholder until `enter` picks the real mode.
        mode: Mode::PausedByUser,
        current_node: project.start_node.clone(),
        playhead_ms: 0,
        annotations_visible: false,
        answered: Default::default(),
        forks_taken: Vec::new(),
        branch_paths_seen: Default::default(),
        viewer_annotations: Vec::new(),
        comments: Vec::new(),
        next_seq: 0,
        started_at: now,
        last_wall_time: now,
        ended_at: None,
        active_ms: 0,
        playing_since: None,
        optional_interactions: 0,
    };
    let mut step = Step::new(project, state, now);
    step.emit(EventKind::SessionStarted {
        session_id: session_id.0,
        project_id: project.id.clone(),
        viewer_id: viewer_id.into(),
    });
    let start = project.start_node.clone();
    step.enter(&start)?;
    Ok(step.finish())
}

impl SessionState {
    /// Applies one viewer input. On error the state is left untouched.
    pub fn apply_input(
        &self,
        project: &VideoProject,
        input: &ViewerInput,
        clock: &impl Clock,
    ) -> Result<Transition, EngineError> {
        let mut step = Step::new(project, self.clone(), clock.now());
        match (input, &self.mode) {
            (_, Mode::Ended) => return Err(illegal(self, input)),

            (ViewerInput::Tick { elapsed_ms }, mode) => {
                if *mode == Mode::Playing {
                    let duration = project
                        .node(&self.current_node)
                        .map_or(0, Node::duration_ms);
                    step.state.playhead_ms =
                        self.playhead_ms.saturating_add(*elapsed_ms).min(duration);
                }
            }

            (ViewerInput::SceneFinished, Mode::Playing) => {
                let Some(Node::Scene(scene)) = project.node(&self.current_node) else {
                    return Err(illegal(self, input));
                };
                step.state.playhead_ms = scene.duration_ms;
                step.enter(&scene.next)?;
            }

            (ViewerInput::Pause, Mode::Playing) => {
                step.set_mode(Mode::PausedByUser);
                step.emit(EventKind::PlaybackPaused);
            }

            (ViewerInput::Play, Mode::PausedByUser) => {
                step.set_mode(Mode::Playing);
                step.emit(EventKind::PlaybackResumed);
            }

            (ViewerInput::Answer { chosen_index }, Mode::PausedQuestion(node)) => {
                let question = project
                    .question(node)
                    .ok_or_else(|| EngineError::UnknownNode(node.clone()))?;
                if *chosen_index >= question.choices.len() {
                    return Err(EngineError::AnswerOutOfRange {
                        index: *chosen_index,
                        choices: question.choices.len(),
                    });
                }
                let correct = *chosen_index == question.correct_index;
                let seq = step.state.next_seq;
                step.emit(EventKind::QuestionAnswered {
                    node: node.clone(),
                    chosen_index: *chosen_index,
                    correct,
                });
                step.state
                    .answered
                    .entry(node.clone())
                    .or_insert(AnswerRecord {
                        chosen_index: *chosen_index,
                        correct,
                        seq,
                    });
                step.set_mode(Mode::PausedQuestionFeedback {
                    node: node.clone(),
                    chosen_index: *chosen_index,
                });
            }

            (ViewerInput::Acknowledge, Mode::PausedQuestionFeedback { node, .. }) => {
                let question = project
                    .question(node)
                    .ok_or_else(|| EngineError::UnknownNode(node.clone()))?;
                step.enter(&question.next)?;
            }

            (ViewerInput::ChoosePath { option }, Mode::AwaitingFork(node)) => {
                let fork = project
                    .fork(node)
                    .ok_or_else(|| EngineError::UnknownNode(node.clone()))?;
                let chosen = fork
                    .options
                    .iter()
                    .find(|o| &o.option_id == option)
                    .ok_or_else(|| EngineError::UnknownOption(option.clone()))?;
                let seq = step.state.next_seq;
                step.emit(EventKind::ChoosePath {
                    node: node.clone(),
                    option: option.clone(),
                });
                let first_pass = !self.fork_satisfied(node);
                step.state.forks_taken.push(ForkChoice {
                    fork: node.clone(),
                    option: option.clone(),
                    seq,
                    first_pass,
                });
                step.state
                    .branch_paths_seen
                    .insert((node.clone(), option.clone()));
                step.enter(&chosen.target)?;
            }

            (ViewerInput::OpenOverview, mode) if mode.resumable().is_some() => {
                let resume = mode.resumable().expect("checked by guard");
                step.set_mode(Mode::OverviewOpen { resume });
                step.emit(EventKind::OverviewOpened);
            }

            (ViewerInput::CloseOverview, Mode::OverviewOpen { resume }) => {
                step.set_mode((*resume).into());
                step.emit(EventKind::OverviewClosed);
            }

            (ViewerInput::Navigate { target }, Mode::OverviewOpen { .. }) => {
                let node = project
                    .node(target)
                    .ok_or_else(|| EngineError::UnknownNode(target.clone()))?;
                if !node.is_nav_point() {
                    return Err(EngineError::InvalidTarget {
                        node: target.clone(),
                        reason: "not a navigation point",
                    });
                }
                if !self.unlocked_nodes(project).contains(target) {
                    return Err(EngineError::InvalidTarget {
                        node: target.clone(),
                        reason: "behind a fork option not chosen yet",
                    });
                }
                step.emit(EventKind::OverviewNavigated(target.clone()));
                let from = step.state.playhead();
                step.move_to(target, 0);
                step.emit(EventKind::Seeked {
                    from,
                    to: Playhead::new(target.clone(), 0),
                });
                step.enter(target)?;
            }

            (ViewerInput::ToggleAnnotations, mode) if mode.resumable().is_some() => {
                if !self.annotations_available(project) {
                    return Err(EngineError::AnnotationsUnavailable);
                }
                step.state.annotations_visible = !self.annotations_visible;
                step.emit(if step.state.annotations_visible {
                    EventKind::AnnotationsShown
                } else {
                    EventKind::AnnotationsHidden
                });
            }

            (ViewerInput::ExpandAnnotation { annotation }, mode) if mode.resumable().is_some() => {
                let resume = mode.resumable().expect("checked by guard");
                let found = self
                    .find_annotation(project, annotation)
                    .ok_or_else(|| EngineError::UnknownAnnotation(annotation.clone()))?;
                if !self.annotations_visible
                    || !found.anchor.contains(&self.current_node, self.playhead_ms)
                {
                    return Err(EngineError::AnnotationNotShown(annotation.clone()));
                }
                step.set_mode(Mode::AnnotationExpanded {
                    annotation: annotation.clone(),
                    resume,
                });
                step.emit(EventKind::AnnotationExpanded(annotation.clone()));
            }

            (ViewerInput::CollapseAnnotation, Mode::AnnotationExpanded { annotation, resume }) => {
                step.set_mode((*resume).into());
                step.emit(EventKind::AnnotationCollapsed(annotation.clone()));
            }

            (ViewerInput::AddViewerAnnotation(draft), _) => {
                let annotation = self.check_viewer_annotation(project, draft, step.now)?;
                step.emit(EventKind::ViewerAnnotationAdded(annotation.clone()));
                step.state.viewer_annotations.push(annotation);
            }

            (ViewerInput::AddComment { text }, _) => {
                if text.trim().is_empty() {
                    return Err(EngineError::EmptyComment);
                }
                let seq = step.state.next_seq;
                step.emit(EventKind::CommentAdded(text.clone()));
                step.state.comments.push(CommentRecord {
                    text: text.clone(),
                    playhead: self.playhead(),
                    created_at: step.now,
                    seq,
                });
            }

            (
                ViewerInput::Seek { to },
                Mode::Playing
                | Mode::PausedByUser
                | Mode::PausedQuestionFeedback { .. }
                | Mode::OverviewOpen { .. }
                | Mode::AnnotationExpanded { .. },
            ) => {
                let Some(Node::Scene(scene)) = project.node(&to.node) else {
                    return Err(EngineError::InvalidTarget {
                        node: to.node.clone(),
                        reason: "seek target must be a scene",
                    });
                };
                if to.offset_ms > scene.duration_ms {
                    return Err(EngineError::InvalidTarget {
                        node: to.node.clone(),
                        reason: "offset beyond the end of the scene",
                    });
                }
                if !self.unlocked_nodes(project).contains(&to.node) {
                    return Err(EngineError::InvalidTarget {
                        node: to.node.clone(),
                        reason: "behind a fork option not chosen yet",
                    });
                }
                let from = self.playhead();
                if matches!(self.mode, Mode::PausedQuestionFeedback { .. }) {
                    // Leaving the question dismisses its feedback.
                    step.set_mode(Mode::PausedByUser);
                }
                step.move_to(&to.node, to.offset_ms);
                step.emit(EventKind::Seeked { from, to: to.clone() });
            }

            _ => return Err(illegal(self, input)),
        }
        Ok(step.finish())
    }

    /// Answers the pending question. Only the first answer per question
    /// counts toward metrics; later ones are recorded but flagged.
    pub fn answer_question(
        &self,
        project: &VideoProject,
        chosen_index: usize,
        clock: &impl Clock,
    ) -> Result<(Transition, Feedback), EngineError> {
        let Mode::PausedQuestion(node) = &self.mode else {
            return Err(EngineError::IllegalTransition {
                mode: self.mode.name(),
                input: "answer",
            });
        };
        let counts_for_metrics = !self.answered.contains_key(node);
        let transition =
            self.apply_input(project, &ViewerInput::Answer { chosen_index }, clock)?;
        let correct_index = project
            .question(node)
            .map(|q| q.correct_index)
            .unwrap_or_default();
        Ok((
            transition,
            Feedback {
                correct_index,
                chosen_index,
                counts_for_metrics,
            },
        ))
    }

    /// The discrete inputs accepted in the current state: every answer,
    /// fork option, unlocked overview entry, visible annotation and seek to
    /// the start of an unlocked scene. Media-time ticks, comments and viewer
    /// annotations take free-form arguments and are not listed.
    pub fn available_inputs(&self, project: &VideoProject) -> Vec<ViewerInput> {
        let mut inputs = Vec::new();
        let unlocked = self.unlocked_nodes(project);
        let seeks = |inputs: &mut Vec<ViewerInput>| {
            for id in &unlocked {
                if let Some(Node::Scene(_)) = project.node(id) {
                    inputs.push(ViewerInput::Seek {
                        to: Playhead::new((*id).clone(), 0),
                    });
                }
            }
        };
        match &self.mode {
            Mode::Ended => {}
            Mode::Playing | Mode::PausedByUser => {
                inputs.push(if self.mode == Mode::Playing {
                    ViewerInput::Pause
                } else {
                    ViewerInput::Play
                });
                if self.mode == Mode::Playing
                    && matches!(project.node(&self.current_node), Some(Node::Scene(_)))
                {
                    inputs.push(ViewerInput::SceneFinished);
                }
                inputs.push(ViewerInput::OpenOverview);
                if self.annotations_available(project) {
                    inputs.push(ViewerInput::ToggleAnnotations);
                }
                if self.annotations_visible {
                    for a in self.annotations_here(project) {
                        if a.anchor.contains(&self.current_node, self.playhead_ms) {
                            inputs.push(ViewerInput::ExpandAnnotation {
                                annotation: a.annotation_id.clone(),
                            });
                        }
                    }
                }
                seeks(&mut inputs);
            }
            Mode::PausedQuestion(node) => {
                let choices = project.question(node).map_or(0, |q| q.choices.len());
                inputs.extend((0..choices).map(|chosen_index| ViewerInput::Answer { chosen_index }));
            }
            Mode::PausedQuestionFeedback { .. } => {
                inputs.push(ViewerInput::Acknowledge);
                seeks(&mut inputs);
            }
            Mode::AwaitingFork(node) => {
                if let Some(fork) = project.fork(node) {
                    inputs.extend(fork.options.iter().map(|o| ViewerInput::ChoosePath {
                        option: o.option_id.clone(),
                    }));
                }
            }
            Mode::OverviewOpen { .. } => {
                inputs.push(ViewerInput::CloseOverview);
                for id in &unlocked {
                    if project.node(id).is_some_and(Node::is_nav_point) {
                        inputs.push(ViewerInput::Navigate {
                            target: (*id).clone(),
                        });
                    }
                }
                seeks(&mut inputs);
            }
            Mode::AnnotationExpanded { .. } => {
                inputs.push(ViewerInput::CollapseAnnotation);
                seeks(&mut inputs);
            }
        }
        inputs
    }

    fn check_viewer_annotation(
        &self,
        project: &VideoProject,
        draft: &AnnotationDraft,
        now: Timestamp,
    ) -> Result<Annotation, EngineError> {
        let invalid = |reason: &str| EngineError::InvalidAnnotation(reason.to_string());
        if draft.title.trim().is_empty() {
            return Err(invalid("title is empty"));
        }
        if draft.annotation_id.as_str().is_empty() {
            return Err(invalid("annotation id is empty"));
        }
        if self.find_annotation(project, &draft.annotation_id).is_some() {
            return Err(invalid("annotation id already in use"));
        }
        let node = project
            .node(&draft.anchor.node)
            .ok_or_else(|| invalid("anchor node does not exist"))?;
        if draft.anchor.start_ms > draft.anchor.end_ms || draft.anchor.end_ms > node.duration_ms() {
            return Err(invalid("anchor range outside the node"));
        }
        Ok(Annotation {
            annotation_id: draft.annotation_id.clone(),
            author_kind: AuthorKind::Viewer,
            anchor: draft.anchor.clone(),
            title: draft.title.clone(),
            body: draft.body.clone(),
            created_at: Some(now),
        })
    }
}

/// Reconstructs the input that produced a logged event, given the state the
/// event was applied to. Returns the input and, for events logged while
/// playing, the offset playback had reached when the input happened.
pub(crate) fn input_for_event(
    state: &SessionState,
    event: &SessionEvent,
) -> Option<(ViewerInput, Option<u64>)> {
    let at = (event.playhead.node == state.current_node).then_some(event.playhead.offset_ms);
    let input = match &event.kind {
        EventKind::SessionStarted { .. } => return None,
        kind if kind.is_node_entry() => {
            let input = match state.mode {
                Mode::Playing => ViewerInput::SceneFinished,
                Mode::PausedQuestionFeedback { .. } => ViewerInput::Acknowledge,
                _ => return None,
            };
            return Some((input, None));
        }
        EventKind::PlaybackResumed => ViewerInput::Play,
        EventKind::PlaybackPaused => ViewerInput::Pause,
        EventKind::QuestionAnswered { chosen_index, .. } => ViewerInput::Answer {
            chosen_index: *chosen_index,
        },
        EventKind::ChoosePath { option, .. } => ViewerInput::ChoosePath {
            option: option.clone(),
        },
        EventKind::OverviewOpened => ViewerInput::OpenOverview,
        EventKind::OverviewNavigated(target) => ViewerInput::Navigate {
            target: target.clone(),
        },
        EventKind::OverviewClosed => ViewerInput::CloseOverview,
        EventKind::AnnotationsShown | EventKind::AnnotationsHidden => {
            ViewerInput::ToggleAnnotations
        }
        EventKind::AnnotationExpanded(annotation) => ViewerInput::ExpandAnnotation {
            annotation: annotation.clone(),
        },
        EventKind::AnnotationCollapsed(_) => ViewerInput::CollapseAnnotation,
        EventKind::ViewerAnnotationAdded(annotation) => {
            ViewerInput::AddViewerAnnotation(AnnotationDraft::from(annotation))
        }
        EventKind::CommentAdded(text) => ViewerInput::AddComment { text: text.clone() },
        EventKind::Seeked { from, to } => {
            let pre = (from.node == state.current_node).then_some(from.offset_ms);
            return Some((ViewerInput::Seek { to: to.clone() }, pre));
        }
        _ => return None,
    };
    Some((input, at))
}

pub(crate) fn describe(kind: &EventKind) -> String {
    String::from(kind.name())
}
