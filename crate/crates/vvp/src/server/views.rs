//! JSON views served to the player.

use serde_json::{json, Map, Value};
use vvp_core::graph::{Node, VideoProject};
use vvp_core::session::{Mode, ResumeMode, SessionState, ViewerInput};

use crate::document::serialize_project;
use crate::report::metrics_value;
use crate::time::format_timestamp;
use crate::wire::{AnnotationDto, PlayheadDto};

/// The project document without answer keys.
pub fn public_project(project: &VideoProject) -> Value {
    let mut value: Value =
        serde_json::from_str(&serialize_project(project)).expect("canonical document parses");
    if let Some(nodes) = value.get_mut("nodes").and_then(Value::as_array_mut) {
        for node in nodes {
            if let Some(obj) = node.as_object_mut() {
                obj.remove("correct_index");
            }
        }
    }
    value
}

fn resume_name(resume: ResumeMode) -> &'static str {
    match resume {
        ResumeMode::Playing => "playing",
        ResumeMode::PausedByUser => "paused_by_user",
    }
}

fn mode_value(mode: &Mode) -> Value {
    let mut obj = Map::new();
    obj.insert("name".into(), mode.name().into());
    match mode {
        Mode::PausedQuestion(node) | Mode::AwaitingFork(node) => {
            obj.insert("node".into(), node.as_str().into());
        }
        Mode::PausedQuestionFeedback { node, chosen_index } => {
            obj.insert("node".into(), node.as_str().into());
            obj.insert("chosen_index".into(), (*chosen_index).into());
        }
        Mode::OverviewOpen { resume } => {
            obj.insert("resume".into(), resume_name(*resume).into());
        }
        Mode::AnnotationExpanded { annotation, resume } => {
            obj.insert("annotation".into(), annotation.as_str().into());
            obj.insert("resume".into(), resume_name(*resume).into());
        }
        Mode::Playing | Mode::PausedByUser | Mode::Ended => {}
    }
    obj.into()
}

pub fn input_value(input: &ViewerInput) -> Value {
    let mut obj = Map::new();
    obj.insert("input".into(), input.name().into());
    match input {
        ViewerInput::Tick { elapsed_ms } => {
            obj.insert("elapsed_ms".into(), (*elapsed_ms).into());
        }
        ViewerInput::Answer { chosen_index } => {
            obj.insert("chosen_index".into(), (*chosen_index).into());
        }
        ViewerInput::ChoosePath { option } => {
            obj.insert("option".into(), option.as_str().into());
        }
        ViewerInput::Navigate { target } => {
            obj.insert("target".into(), target.as_str().into());
        }
        ViewerInput::ExpandAnnotation { annotation } => {
            obj.insert("annotation".into(), annotation.as_str().into());
        }
        ViewerInput::AddComment { text } => {
            obj.insert("text".into(), text.as_str().into());
        }
        ViewerInput::Seek { to } => {
            obj.insert("to".into(), json!(PlayheadDto::from(to)));
        }
        ViewerInput::AddViewerAnnotation(draft) => {
            obj.insert("annotation".into(), draft.annotation_id.as_str().into());
        }
        ViewerInput::SceneFinished
        | ViewerInput::Pause
        | ViewerInput::Play
        | ViewerInput::Acknowledge
        | ViewerInput::OpenOverview
        | ViewerInput::CloseOverview
        | ViewerInput::ToggleAnnotations
        | ViewerInput::CollapseAnnotation => {}
    }
    obj.into()
}

/// Everything a client needs to resume rendering a session. The correct
/// choice of a question is only included once this session answered it.
pub fn snapshot(state: &SessionState, project: &VideoProject) -> Value {
    let question = match &state.mode {
        Mode::PausedQuestion(node) | Mode::PausedQuestionFeedback { node, .. } => {
            project.question(node).map(|q| {
                let mut obj = json!({
                    "node": node.as_str(),
                    "prompt": q.prompt,
                    "choices": q.choices,
                });
                let revealed = state.answered.contains_key(node)
                    || matches!(state.mode, Mode::PausedQuestionFeedback { .. });
                if revealed {
                    obj["correct_index"] = q.correct_index.into();
                }
                obj
            })
        }
        _ => None,
    };
    let fork = match &state.mode {
        Mode::AwaitingFork(node) => project.fork(node).map(|f| {
            json!({
                "node": node.as_str(),
                "prompt": f.prompt,
                "options": f.options.iter().map(|o| json!({
                    "option_id": o.option_id.as_str(),
                    "label": o.label,
                    "target": o.target.as_str(),
                })).collect::<Vec<_>>(),
            })
        }),
        _ => None,
    };
    let expanded = match &state.mode {
        Mode::AnnotationExpanded { annotation, .. } => state
            .find_annotation(project, annotation)
            .map(|a| json!(AnnotationDto::from(a))),
        _ => None,
    };
    let media = match project.node(&state.current_node) {
        Some(Node::Scene(scene)) => Some(scene.media.as_str()),
        _ => None,
    };
    json!({
        "session_id": state.session_id.as_str(),
        "project_id": state.project_id,
        "viewer_id": state.viewer_id,
        "status": if state.is_ended() { "ended" } else { "active" },
        "mode": mode_value(&state.mode),
        "node": state.current_node.as_str(),
        "media": media,
        "playhead": PlayheadDto::from(&state.playhead()),
        "next_seq": state.next_seq,
        "annotations_visible": state.annotations_visible,
        "annotations_available": state.annotations_available(project),
        "annotations_here": state
            .annotations_here(project)
            .map(AnnotationDto::from)
            .collect::<Vec<_>>(),
        "question": question,
        "fork": fork,
        "expanded_annotation": expanded,
        "answered": state.answered.iter().map(|(node, a)| (node.to_string(), json!({
            "chosen_index": a.chosen_index,
            "correct": a.correct,
            "seq": a.seq,
        }))).collect::<Map<_, _>>(),
        "forks_taken": state.forks_taken.iter().map(|c| json!({
            "fork": c.fork.as_str(),
            "option": c.option.as_str(),
            "seq": c.seq,
            "first_pass": c.first_pass,
        })).collect::<Vec<_>>(),
        "unlocked_nodes": state
            .unlocked_nodes(project)
            .into_iter()
            .map(|n| n.as_str())
            .collect::<Vec<_>>(),
        "viewer_annotations": state
            .viewer_annotations
            .iter()
            .map(AnnotationDto::from)
            .collect::<Vec<_>>(),
        "comments": state.comments.iter().map(|c| json!({
            "text": c.text,
            "playhead": PlayheadDto::from(&c.playhead),
            "created_at": format_timestamp(c.created_at),
            "seq": c.seq,
        })).collect::<Vec<_>>(),
        "available_inputs": state
            .available_inputs(project)
            .iter()
            .map(input_value)
            .collect::<Vec<_>>(),
        "metrics": metrics_value(&state.metrics(project)),
    })
}
