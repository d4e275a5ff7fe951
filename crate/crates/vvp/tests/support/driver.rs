//! Random viewers for the session engine.

use rand::seq::SliceRandom;
use rand::Rng;
use vvp_core::graph::{AnchorRange, BodyItem, VideoProject};
use vvp_core::session::{
    start_session, AnnotationDraft, EngineError, Playhead, SessionEvent, SessionState, Transition,
    ViewerInput,
};
use vvp_core::{NodeId, SessionId, Timestamp};

use super::T0;

pub struct Run {
    pub log: Vec<SessionEvent>,
    /// State after the final input, including unlogged ticks.
    pub state: SessionState,
    /// State right after the last logged event.
    pub logged: SessionState,
    pub inputs: Vec<(ViewerInput, Timestamp)>,
}

pub struct Step<'a> {
    pub before: &'a SessionState,
    pub input: &'a ViewerInput,
    pub now: Timestamp,
    pub result: &'a Result<Transition, EngineError>,
}

/// Any input at all, legal or not in the current mode.
pub fn arbitrary_input(project: &VideoProject, rng: &mut impl Rng) -> ViewerInput {
    let nodes: Vec<&NodeId> = project.nodes.keys().collect();
    let node = (*nodes.choose(rng).unwrap()).clone();
    match rng.gen_range(0..13) {
        0 => ViewerInput::Play,
        1 => ViewerInput::Pause,
        2 => ViewerInput::SceneFinished,
        3 => ViewerInput::Acknowledge,
        4 => ViewerInput::Answer {
            chosen_index: rng.gen_range(0..4),
        },
        5 => {
            let ids = ["app", "button", "auto", "neighbor", "drone", "trunk", "bogus"];
            ViewerInput::ChoosePath {
                option: (*ids.choose(rng).unwrap()).into(),
            }
        }
        6 => ViewerInput::OpenOverview,
        7 => ViewerInput::CloseOverview,
        8 => ViewerInput::Navigate { target: node },
        9 => ViewerInput::ToggleAnnotations,
        10 => ViewerInput::ExpandAnnotation {
            annotation: ["a_fill_sensor", "a_drone_specs", "v1", "nope"]
                .choose(rng)
                .copied()
                .unwrap()
                .into(),
        },
        11 => ViewerInput::CollapseAnnotation,
        _ => ViewerInput::Seek {
            to: Playhead::new(node, rng.gen_range(0..60_000)),
        },
    }
}

pub fn next_input(
    project: &VideoProject,
    state: &SessionState,
    rng: &mut impl Rng,
    notes: &mut u32,
) -> Option<ViewerInput> {
    let roll: f64 = rng.gen();
    let input = if roll < 0.25 {
        ViewerInput::Tick {
            elapsed_ms: rng.gen_range(0..15_000),
        }
    } else if roll < 0.29 {
        ViewerInput::AddComment {
            text: format!("comment {}", rng.gen_range(0..100)),
        }
    } else if roll < 0.32 {
        let end = project.node(&state.current_node).map_or(0, |n| n.duration_ms());
        *notes += 1;
        ViewerInput::AddViewerAnnotation(AnnotationDraft {
            annotation_id: format!("v{notes}").into(),
            anchor: AnchorRange {
                node: state.current_node.clone(),
                start_ms: 0,
                end_ms: end,
            },
            title: "imagined differently".into(),
            body: vec![BodyItem::Text("note".into())],
        })
    } else if roll < 0.40 {
        arbitrary_input(project, rng)
    } else {
        state.available_inputs(project).choose(rng)?.clone()
    };
    Some(input)
}

/// Drives a random viewer through `project` for up to `steps` inputs.
pub fn drive(
    project: &VideoProject,
    session: &str,
    rng: &mut impl Rng,
    steps: usize,
    mut observe: impl FnMut(Step<'_>),
) -> Run {
    let mut now = Timestamp(T0 + rng.gen_range(0..1_000_000));
    let start = start_session(project, SessionId::from(session), "viewer", &now).unwrap();
    let mut log = start.events;
    let mut state = start.state;
    let mut logged = state.clone();
    let mut inputs = Vec::new();
    let mut notes = 0;
    for _ in 0..steps {
        if state.is_ended() {
            break;
        }
        let Some(input) = next_input(project, &state, rng, &mut notes) else {
            break;
        };
        now = Timestamp(now.0 + rng.gen_range(0..4_000));
        let result = state.apply_input(project, &input, &now);
        observe(Step {
            before: &state,
            input: &input,
            now,
            result: &result,
        });
        inputs.push((input, now));
        if let Ok(t) = result {
            state = t.state;
            if !t.events.is_empty() {
                log.extend(t.events);
                logged = state.clone();
            }
        }
    }
    Run {
        log,
        state,
        logged,
        inputs,
    }
}

/// Replays recorded inputs without any randomness.
pub fn rerun(
    project: &VideoProject,
    session: &str,
    first: Timestamp,
    inputs: &[(ViewerInput, Timestamp)],
) -> Vec<SessionEvent> {
    let start = start_session(project, SessionId::from(session), "viewer", &first).unwrap();
    let mut log = start.events;
    let mut state = start.state;
    for (input, now) in inputs {
        if let Ok(t) = state.apply_input(project, input, now) {
            log.extend(t.events);
            state = t.state;
        }
    }
    log
}
