#![allow(dead_code)]

pub mod driver;
pub mod generate;
pub mod http;
pub mod soundness;

use vvp_core::graph::VideoProject;
use vvp_core::session::{start_session, Mode, SessionEvent, SessionState, ViewerInput};
use vvp_core::{SessionId, Timestamp};

pub const T0: i64 = 1_700_000_000_000;

/// The scripted demo viewer: watches everything, answers, toggles and
/// expands an annotation, comments, uses the overview to revisit the
/// first fork and plays to the end.
pub fn demo_session(project: &VideoProject) -> (SessionState, Vec<SessionEvent>) {
    let mut now = Timestamp(T0);
    let start = start_session(project, SessionId::from("demo-session"), "demo-viewer", &now)
        .expect("sample starts");
    let mut state = start.state;
    let mut log = start.events;
    let mut step = |state: &mut SessionState, input: ViewerInput, advance_ms: i64| {
        now = Timestamp(now.0 + advance_ms);
        let t = state
            .apply_input(project, &input, &now)
            .unwrap_or_else(|e| panic!("{input:?} in {:?}: {e}", state.mode));
        log.extend(t.events);
        *state = t.state;
    };
    let watch = |state: &mut SessionState, step: &mut dyn FnMut(&mut SessionState, ViewerInput, i64)| {
        let duration = project.node(&state.current_node).unwrap().duration_ms();
        let left = duration - state.playhead_ms;
        step(state, ViewerInput::Tick { elapsed_ms: left }, left as i64);
        step(state, ViewerInput::SceneFinished, 0);
    };
    let answer = |state: &mut SessionState, step: &mut dyn FnMut(&mut SessionState, ViewerInput, i64), right: bool| {
        let Mode::PausedQuestion(node) = &state.mode else {
            panic!("expected a question, in {:?}", state.mode)
        };
        let q = project.question(node).unwrap();
        let chosen_index = if right { q.correct_index } else { (q.correct_index + 1) % q.choices.len() };
        step(state, ViewerInput::Answer { chosen_index }, 6_000);
        step(state, ViewerInput::Acknowledge, 3_000);
    };

    watch(&mut state, &mut step);
    answer(&mut state, &mut step, true);
    step(&mut state, ViewerInput::Tick { elapsed_ms: 12_000 }, 12_000);
    step(&mut state, ViewerInput::Pause, 0);
    step(&mut state, ViewerInput::Play, 20_000);
    watch(&mut state, &mut step);
    answer(&mut state, &mut step, false);
    step(&mut state, ViewerInput::ChoosePath { option: "auto".into() }, 9_000);
    step(&mut state, ViewerInput::Tick { elapsed_ms: 8_000 }, 8_000);
    step(&mut state, ViewerInput::ToggleAnnotations, 0);
    step(
        &mut state,
        ViewerInput::ExpandAnnotation { annotation: "a_fill_sensor".into() },
        1_500,
    );
    step(&mut state, ViewerInput::CollapseAnnotation, 15_000);
    watch(&mut state, &mut step);
    watch(&mut state, &mut step);
    answer(&mut state, &mut step, true);
    step(&mut state, ViewerInput::ChoosePath { option: "drone".into() }, 7_000);
    step(&mut state, ViewerInput::Tick { elapsed_ms: 21_000 }, 21_000);
    step(
        &mut state,
        ViewerInput::AddComment { text: "Who charges the drone?".into() },
        30_000,
    );
    step(&mut state, ViewerInput::OpenOverview, 2_000);
    step(&mut state, ViewerInput::Navigate { target: "f_order".into() }, 4_000);
    step(&mut state, ViewerInput::ChoosePath { option: "button".into() }, 5_000);
    while !state.is_ended() {
        match &state.mode {
            Mode::PausedQuestion(_) => answer(&mut state, &mut step, true),
            Mode::AwaitingFork(_) => {
                step(&mut state, ViewerInput::ChoosePath { option: "drone".into() }, 4_000)
            }
            Mode::PausedQuestionFeedback { .. } => step(&mut state, ViewerInput::Acknowledge, 2_000),
            _ => watch(&mut state, &mut step),
        }
    }
    (state, log)
}

/// A straight playthrough (first option at every fork, every answer
/// correct) with `comments` comments added in the intro scene.
pub fn commented_session(project: &VideoProject, id: &str, comments: usize) -> Vec<SessionEvent> {
    let mut now = Timestamp(T0);
    let start = start_session(project, SessionId::from(id), id, &now).unwrap();
    let mut state = start.state;
    let mut log = start.events;
    let mut apply = |state: &mut SessionState, input: ViewerInput| {
        now = Timestamp(now.0 + 1_000);
        let t = state.apply_input(project, &input, &now).unwrap();
        log.extend(t.events);
        *state = t.state;
    };
    for i in 0..comments {
        apply(&mut state, ViewerInput::AddComment { text: format!("note {i}") });
    }
    while !state.is_ended() {
        let input = match &state.mode {
            Mode::PausedQuestion(node) => ViewerInput::Answer {
                chosen_index: project.question(node).unwrap().correct_index,
            },
            Mode::PausedQuestionFeedback { .. } => ViewerInput::Acknowledge,
            Mode::AwaitingFork(node) => ViewerInput::ChoosePath {
                option: project.fork(node).unwrap().options[0].option_id.clone(),
            },
            _ => ViewerInput::SceneFinished,
        };
        apply(&mut state, input);
    }
    log
}
