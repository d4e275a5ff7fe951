//! Session-engine invariants checked over one random viewer.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vvp_core::graph::{enumerate_branch_paths, Node, VideoProject};
use vvp_core::session::{
    replay, session_metrics, EventKind, Mode, SessionEvent, SessionLog, ViewerInput,
};
use vvp_core::{NodeId, OptionId};

use super::driver::{drive, rerun};

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Nodes reachable from the start when forks may only be crossed through
/// the given (fork, option) pairs.
pub fn reach(project: &VideoProject, chosen: &BTreeSet<(NodeId, OptionId)>) -> BTreeSet<NodeId> {
    let mut seen = BTreeSet::from([project.start_node.clone()]);
    let mut queue = VecDeque::from([project.start_node.clone()]);
    while let Some(id) = queue.pop_front() {
        let next: Vec<NodeId> = match &project.nodes[&id] {
            Node::Scene(s) => vec![s.next.clone()],
            Node::Question(q) => vec![q.next.clone()],
            Node::Fork(f) => f
                .options
                .iter()
                .filter(|o| chosen.contains(&(id.clone(), o.option_id.clone())))
                .map(|o| o.target.clone())
                .collect(),
            Node::End => vec![],
        };
        for n in next {
            if seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    seen
}

/// Optional interactions counted straight from the event kinds.
pub fn count_optional(log: &[SessionEvent]) -> u64 {
    let mut forks = BTreeSet::new();
    let mut pairs = BTreeSet::new();
    let mut count = 0;
    for e in log {
        count += match &e.kind {
            EventKind::AnnotationExpanded(_)
            | EventKind::OverviewNavigated(_)
            | EventKind::ViewerAnnotationAdded(_)
            | EventKind::CommentAdded(_) => 1,
            EventKind::ChoosePath { node, option } => {
                let extra = forks.contains(node) && !pairs.contains(&(node.clone(), option.clone()));
                forks.insert(node.clone());
                pairs.insert((node.clone(), option.clone()));
                extra as u64
            }
            _ => 0,
        };
    }
    count
}

fn check_step(
    project: &VideoProject,
    step: &super::driver::Step<'_>,
    counted: &mut BTreeMap<NodeId, u32>,
) -> Result<(), String> {
    let before = step.before;
    // Pause soundness: media time does not move outside Playing.
    if before.mode != Mode::Playing {
        let tick = ViewerInput::Tick { elapsed_ms: 5_000 };
        match before.apply_input(project, &tick, &step.now) {
            Ok(t) => {
                ensure!(
                    t.state.playhead_ms == before.playhead_ms && t.events.is_empty(),
                    "playhead moved in {:?}",
                    before.mode
                );
            }
            Err(_) => ensure!(before.is_ended(), "tick rejected in {:?}", before.mode),
        }
    }
    for input in before.available_inputs(project) {
        ensure!(
            before.apply_input(project, &input, &step.now).is_ok(),
            "listed input {input:?} rejected in {:?}",
            before.mode
        );
    }
    if before.mode.is_mandatory() {
        for input in [ViewerInput::Play, ViewerInput::OpenOverview, ViewerInput::SceneFinished] {
            ensure!(
                before.apply_input(project, &input, &step.now).is_err(),
                "{input:?} accepted in mandatory {:?}",
                before.mode
            );
        }
    }
    if let (ViewerInput::Answer { chosen_index }, Mode::PausedQuestion(node), Ok(_)) =
        (step.input, &before.mode, step.result)
    {
        let (_, feedback) = before
            .answer_question(project, *chosen_index, &step.now)
            .map_err(|e| e.to_string())?;
        if feedback.counts_for_metrics {
            *counted.entry(node.clone()).or_default() += 1;
        }
    }
    Ok(())
}

/// Drives one random viewer and checks pause soundness, fork gating,
/// first-answer uniqueness, replay and determinism.
pub fn check_session(project: &VideoProject, seed: u64, steps: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counted = BTreeMap::new();
    let mut failure = None;
    let run = drive(project, "s", &mut rng, steps, |step| {
        if failure.is_none() {
            failure = check_step(project, &step, &mut counted).err();
        }
    });
    if let Some(f) = failure {
        return Err(f);
    }

    ensure!(counted.values().all(|&c| c == 1), "a question was scored twice");
    let log = &run.log;
    let mut first_answers = BTreeMap::new();
    for e in log {
        if let EventKind::QuestionAnswered { node, chosen_index, correct } = &e.kind {
            first_answers.entry(node.clone()).or_insert((*chosen_index, *correct, e.seq));
        }
    }
    let recorded: BTreeMap<_, _> = run
        .state
        .answered
        .iter()
        .map(|(n, a)| (n.clone(), (a.chosen_index, a.correct, a.seq)))
        .collect();
    ensure!(recorded == first_answers, "answers are not the first answers");
    ensure!(counted.len() == first_answers.len(), "scored answers differ from logged");

    for (i, e) in log.iter().enumerate() {
        ensure!(e.seq == i as u64, "gap at seq {i}");
        let duration = project.node(&e.playhead.node).unwrap().duration_ms();
        ensure!(e.playhead.offset_ms <= duration, "playhead past the end at seq {i}");
    }
    ensure!(
        log.windows(2).all(|w| w[0].wall_time <= w[1].wall_time),
        "wall time went backwards"
    );

    let mut chosen = BTreeSet::new();
    for e in log {
        ensure!(
            reach(project, &chosen).contains(&e.playhead.node),
            "{} entered before its fork",
            e.playhead.node
        );
        if let EventKind::ChoosePath { node, option } = &e.kind {
            chosen.insert((node.clone(), option.clone()));
        }
    }

    let session_log = SessionLog::from(log.clone());
    let replayed = replay(&session_log, project)
        .map_err(|e| format!("corrupt log at seq {}: {}", e.seq, e.reason))?;
    ensure!(replayed == run.logged, "replay differs from the live state");
    let metrics = session_metrics(&session_log, project).map_err(|e| e.reason)?;
    ensure!(metrics == replayed.metrics(project), "metrics differ after replay");
    ensure!(metrics == run.state.metrics(project), "metrics differ from live");
    ensure!(
        metrics.optional_interactions == count_optional(log),
        "optional interactions {} vs {}",
        metrics.optional_interactions,
        count_optional(log)
    );
    ensure!(metrics.correct_answers <= metrics.questions_available, "too many correct");
    ensure!(
        metrics.branch_paths_seen <= enumerate_branch_paths(project).paths.len() as u64,
        "too many paths"
    );
    ensure!(metrics.active_time_ms <= metrics.time_spent_ms, "active exceeds total");

    let again = rerun(project, "s", log[0].wall_time, &run.inputs);
    ensure!(&again == log, "rerun is not deterministic");
    Ok(())
}
