use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use super::{Node, NavigationPoint, VideoProject};
use crate::{NodeId, OptionId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("node {from} refers to missing node {to}")]
    DanglingTarget { from: NodeId, to: NodeId },
    #[error("start node {0} does not exist")]
    MissingStart(NodeId),
}

/// The chain of nodes entered through one fork option, up to but excluding
/// the next fork or end node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchPath {
    pub fork: NodeId,
    pub option: OptionId,
    pub nodes: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchPaths {
    pub paths: Vec<BranchPath>,
    /// Fewest forks crossed by any start-to-end route.
    pub minimum_paths_per_playthrough: usize,
}

/// Nodes reachable from the start node by following `next` and option edges.
pub fn reachable_nodes(project: &VideoProject) -> Result<BTreeSet<NodeId>, GraphError> {
    if !project.nodes.contains_key(&project.start_node) {
        return Err(GraphError::MissingStart(project.start_node.clone()));
    }
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([&project.start_node]);
    seen.insert(project.start_node.clone());
    while let Some(id) = queue.pop_front() {
        let node = &project.nodes[id];
        for next in node.successors() {
            if !project.nodes.contains_key(next) {
                return Err(GraphError::DanglingTarget {
                    from: id.clone(),
                    to: next.clone(),
                });
            }
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}

/// Like [`reachable_nodes`] but silently skips missing targets.
pub(crate) fn reachable_lenient(project: &VideoProject) -> BTreeSet<&NodeId> {
    let mut seen = BTreeSet::new();
    let Some((start, _)) = project.nodes.get_key_value(&project.start_node) else {
        return seen;
    };
    let mut queue = VecDeque::from([start]);
    seen.insert(start);
    while let Some(id) = queue.pop_front() {
        for next in project.nodes[id].successors() {
            if let Some((key, _)) = project.nodes.get_key_value(next) {
                if seen.insert(key) {
                    queue.push_back(key);
                }
            }
        }
    }
    seen
}

/// Nodes from which some end node can be reached.
pub(crate) fn can_reach_end(project: &VideoProject) -> BTreeSet<&NodeId> {
    let mut predecessors: BTreeMap<&NodeId, Vec<&NodeId>> = BTreeMap::new();
    for (id, node) in &project.nodes {
        for next in node.successors() {
            if let Some((key, _)) = project.nodes.get_key_value(next) {
                predecessors.entry(key).or_default().push(id);
            }
        }
    }
    let mut seen: BTreeSet<&NodeId> = project
        .nodes
        .iter()
        .filter(|(_, n)| matches!(n, Node::End))
        .map(|(id, _)| id)
        .collect();
    let mut queue: VecDeque<&NodeId> = seen.iter().copied().collect();
    while let Some(id) = queue.pop_front() {
        for prev in predecessors.get(id).into_iter().flatten() {
            if seen.insert(prev) {
                queue.push_back(prev);
            }
        }
    }
    seen
}

/// One branch path per fork option (forks in id order, options in author
/// order), plus the minimum number of forks a viewer must pass to finish.
pub fn enumerate_branch_paths(project: &VideoProject) -> BranchPaths {
    let mut paths = Vec::new();
    for (fork_id, node) in &project.nodes {
        let Node::Fork(fork) = node else { continue };
        for option in &fork.options {
            let mut nodes = Vec::new();
            let mut seen = BTreeSet::new();
            let mut cursor = Some(&option.target);
            while let Some(id) = cursor {
                let next = match project.nodes.get(id) {
                    None | Some(Node::Fork(_)) | Some(Node::End) => break,
                    Some(Node::Scene(s)) => &s.next,
                    Some(Node::Question(q)) => &q.next,
                };
                if !seen.insert(id) {
                    break;
                }
                nodes.push(id.clone());
                cursor = Some(next);
            }
            paths.push(BranchPath {
                fork: fork_id.clone(),
                option: option.option_id.clone(),
                nodes,
            });
        }
    }
    BranchPaths {
        paths,
        minimum_paths_per_playthrough: min_forks_to_end(project).unwrap_or(0),
    }
}

/// 0-1 breadth-first search where leaving a fork costs one.
fn min_forks_to_end(project: &VideoProject) -> Option<usize> {
    let start = project.nodes.get_key_value(&project.start_node)?.0;
    let mut dist: BTreeMap<&NodeId, usize> = BTreeMap::from([(start, 0)]);
    let mut deque = VecDeque::from([start]);
    let mut best: Option<usize> = None;
    while let Some(id) = deque.pop_front() {
        let here = dist[id];
        let node = &project.nodes[id];
        if matches!(node, Node::End) {
            best = Some(best.map_or(here, |b| b.min(here)));
            continue;
        }
        let cost = usize::from(matches!(node, Node::Fork(_)));
        for next in node.successors() {
            let Some((key, _)) = project.nodes.get_key_value(next) else {
                continue;
            };
            let candidate = here + cost;
            if dist.get(key).is_none_or(|&d| candidate < d) {
                dist.insert(key, candidate);
                if cost == 0 {
                    deque.push_front(key);
                } else {
                    deque.push_back(key);
                }
            }
        }
    }
    best
}

/// Overview entries for every flagged node, ordered by position on the
/// default path.
///
/// Positions are cumulative scene durations along a depth-first walk that
/// always explores a fork's first option first, so nodes on the default path
/// (first option everywhere) get their default-path position and alternative
/// branches start at their fork's position. Ties keep walk order.
pub fn navigation_points(project: &VideoProject) -> Vec<NavigationPoint> {
    let positions = timeline_positions(project);
    let mut points: Vec<(usize, NavigationPoint)> = positions
        .iter()
        .filter_map(|(id, &(position, order))| {
            let node = project.nodes.get(*id)?;
            if !node.is_nav_point() {
                return None;
            }
            Some((
                order,
                NavigationPoint {
                    node: (*id).clone(),
                    timeline_position_ms: position,
                    title: node.label().into(),
                    category: node.nav_category()?,
                },
            ))
        })
        .collect();
    points.sort_by_key(|(order, p)| (p.timeline_position_ms, *order));
    points.into_iter().map(|(_, p)| p).collect()
}

/// Node -> (timeline position, discovery order).
pub(crate) fn timeline_positions(project: &VideoProject) -> BTreeMap<&NodeId, (u64, usize)> {
    let mut positions: BTreeMap<&NodeId, (u64, usize)> = BTreeMap::new();
    let roots = project
        .nodes
        .get_key_value(&project.start_node)
        .map(|(k, _)| k)
        .into_iter()
        .chain(project.nodes.keys());
    for root in roots {
        if positions.contains_key(root) {
            continue;
        }
        let mut stack = vec![(root, 0u64)];
        while let Some((id, position)) = stack.pop() {
            if positions.contains_key(id) {
                continue;
            }
            let order = positions.len();
            positions.insert(id, (position, order));
            let node = &project.nodes[id];
            let after = position + node.duration_ms();
            let successors: Vec<&NodeId> = node
                .successors()
                .filter_map(|n| project.nodes.get_key_value(n).map(|(k, _)| k))
                .collect();
            for next in successors.into_iter().rev() {
                if !positions.contains_key(next) {
                    stack.push((next, after));
                }
            }
        }
    }
    positions
}
