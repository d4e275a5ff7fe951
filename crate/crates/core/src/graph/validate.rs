use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::traverse::{can_reach_end, reachable_lenient};
use super::{Node, VideoProject};
use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IssueCode {
    DanglingTarget,
    UnreachableNode,
    NoEndNode,
    BadCorrectIndex,
    EmptyFork,
    BadAnchor,
    DuplicateId,
    ZeroDuration,
}

impl IssueCode {
    pub fn as_str(self) -> &'static str {
        match self {
            IssueCode::DanglingTarget => "DanglingTarget",
            IssueCode::UnreachableNode => "UnreachableNode",
            IssueCode::NoEndNode => "NoEndNode",
            IssueCode::BadCorrectIndex => "BadCorrectIndex",
            IssueCode::EmptyFork => "EmptyFork",
            IssueCode::BadAnchor => "BadAnchor",
            IssueCode::DuplicateId => "DuplicateId",
            IssueCode::ZeroDuration => "ZeroDuration",
        }
    }
}

impl fmt::Display for IssueCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Issue {
    pub code: IssueCode,
    pub node: Option<NodeId>,
    pub detail: String,
}

impl Issue {
    pub fn new(code: IssueCode, node: Option<&NodeId>, detail: impl Into<String>) -> Self {
        Self {
            code,
            node: node.cloned(),
            detail: detail.into(),
        }
    }

    fn sort_key(&self) -> (Option<&NodeId>, IssueCode, &str) {
        (self.node.as_ref(), self.code, &self.detail)
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            Some(node) => write!(f, "{} [{}]: {}", self.code, node, self.detail),
            None => write!(f, "{}: {}", self.code, self.detail),
        }
    }
}

/// Errors make a project unplayable; warnings do not.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub errors: Vec<Issue>,
    pub warnings: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_playable(&self) -> bool {
        self.errors.is_empty()
    }

    /// Adds issues found outside the graph (e.g. while parsing a document)
    /// and restores the canonical ordering.
    pub fn merge(&mut self, errors: Vec<Issue>, warnings: Vec<Issue>) {
        self.errors.extend(errors);
        self.warnings.extend(warnings);
        self.sort();
    }

    fn sort(&mut self) {
        self.errors.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        self.warnings.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        self.errors.dedup();
        self.warnings.dedup();
    }
}

/// Reports every structural problem of `project`. Ordering is by node id
/// (project-level entries first), then code, then detail.
pub fn validate_graph(project: &VideoProject) -> ValidationReport {
    let mut errors = Vec::new();
    let mut warnings = Vec::new();

    for media in project.media_assets.values() {
        if media.duration_ms == 0 {
            errors.push(Issue::new(
                IssueCode::ZeroDuration,
                None,
                format!("media {} has zero duration", media.media_id),
            ));
        }
    }

    if !project.nodes.contains_key(&project.start_node) {
        errors.push(Issue::new(
            IssueCode::DanglingTarget,
            None,
            format!("start_node {} does not exist", project.start_node),
        ));
    }

    let dangling = |errors: &mut Vec<Issue>, from: &NodeId, field: &str, to: &NodeId| {
        if !project.nodes.contains_key(to) {
            errors.push(Issue::new(
                IssueCode::DanglingTarget,
                Some(from),
                format!("{field} refers to missing node {to}"),
            ));
        }
    };

    let mut used_media = BTreeSet::new();
    for (id, node) in &project.nodes {
        match node {
            Node::Scene(scene) => {
                used_media.insert(&scene.media);
                if !project.media_assets.contains_key(&scene.media) {
                    errors.push(Issue::new(
                        IssueCode::DanglingTarget,
                        Some(id),
                        format!("media refers to missing asset {}", scene.media),
                    ));
                }
                if scene.duration_ms == 0 {
                    errors.push(Issue::new(
                        IssueCode::ZeroDuration,
                        Some(id),
                        "scene has zero duration",
                    ));
                }
                dangling(&mut errors, id, "next", &scene.next);
            }
            Node::Fork(fork) => {
                if fork.options.len() < 2 {
                    errors.push(Issue::new(
                        IssueCode::EmptyFork,
                        Some(id),
                        format!("fork has {} option(s), needs at least 2", fork.options.len()),
                    ));
                }
                let mut option_ids = BTreeSet::new();
                let mut targets = BTreeSet::new();
                for option in &fork.options {
                    if option.label.trim().is_empty() {
                        errors.push(Issue::new(
                            IssueCode::EmptyFork,
                            Some(id),
                            format!("option {} has an empty label", option.option_id),
                        ));
                    }
                    if !option_ids.insert(&option.option_id) {
                        errors.push(Issue::new(
                            IssueCode::DuplicateId,
                            Some(id),
                            format!("option id {} repeated", option.option_id),
                        ));
                    }
                    if !targets.insert(&option.target) {
                        errors.push(Issue::new(
                            IssueCode::DuplicateId,
                            Some(id),
                            format!("option target {} repeated", option.target),
                        ));
                    }
                    let field = format!("option {}", option.option_id);
                    dangling(&mut errors, id, &field, &option.target);
                }
            }
            Node::Question(question) => {
                if question.choices.len() < 2 {
                    errors.push(Issue::new(
                        IssueCode::BadCorrectIndex,
                        Some(id),
                        format!("question has {} choice(s), needs at least 2", question.choices.len()),
                    ));
                }
                if question.correct_index >= question.choices.len() {
                    errors.push(Issue::new(
                        IssueCode::BadCorrectIndex,
                        Some(id),
                        format!(
                            "correct_index {} out of range for {} choices",
                            question.correct_index,
                            question.choices.len()
                        ),
                    ));
                }
                dangling(&mut errors, id, "next", &question.next);
            }
            Node::End => {}
        }
    }

    for media in project.media_assets.keys() {
        if !used_media.contains(media) {
            warnings.push(Issue::new(
                IssueCode::DanglingTarget,
                None,
                format!("media {media} is not used by any scene"),
            ));
        }
    }

    let mut annotation_ids = BTreeMap::new();
    for annotation in &project.annotations {
        let anchor = &annotation.anchor;
        if annotation_ids.insert(&annotation.annotation_id, ()).is_some() {
            errors.push(Issue::new(
                IssueCode::DuplicateId,
                Some(&anchor.node),
                format!("annotation id {} repeated", annotation.annotation_id),
            ));
        }
        if annotation.title.trim().is_empty() {
            errors.push(Issue::new(
                IssueCode::BadAnchor,
                Some(&anchor.node),
                format!("annotation {} has an empty title", annotation.annotation_id),
            ));
        }
        match project.nodes.get(&anchor.node) {
            None => errors.push(Issue::new(
                IssueCode::DanglingTarget,
                Some(&anchor.node),
                format!("annotation {} anchors to a missing node", annotation.annotation_id),
            )),
            Some(node) => {
                if anchor.start_ms > anchor.end_ms || anchor.end_ms > node.duration_ms() {
                    errors.push(Issue::new(
                        IssueCode::BadAnchor,
                        Some(&anchor.node),
                        format!(
                            "annotation {} spans {}..{} ms outside 0..{} ms",
                            annotation.annotation_id,
                            anchor.start_ms,
                            anchor.end_ms,
                            node.duration_ms()
                        ),
                    ));
                }
            }
        }
    }

    let reachable = reachable_lenient(project);
    if project.nodes.contains_key(&project.start_node) {
        let end_reachable = reachable
            .iter()
            .any(|id| matches!(project.nodes.get(*id), Some(Node::End)));
        if !end_reachable {
            errors.push(Issue::new(
                IssueCode::NoEndNode,
                None,
                "no end node is reachable from the start node",
            ));
        } else {
            let finishing = can_reach_end(project);
            for id in &reachable {
                if !finishing.contains(*id) {
                    warnings.push(Issue::new(
                        IssueCode::NoEndNode,
                        Some(id),
                        "no end node is reachable from this node",
                    ));
                }
            }
        }
    }
    for id in project.nodes.keys() {
        if !reachable.contains(id) {
            warnings.push(Issue::new(
                IssueCode::UnreachableNode,
                Some(id),
                "node is not reachable from the start node",
            ));
        }
    }

    let mut report = ValidationReport { errors, warnings };
    report.sort();
    report
}
