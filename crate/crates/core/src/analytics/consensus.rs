use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::graph::{Node, VideoProject};
use crate::session::{replay, CorruptLog, SessionLog};
use crate::{NodeId, OptionId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptionCount {
    pub option: OptionId,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForkConsensus {
    pub fork: NodeId,
    /// First choice of each session at this fork, per option in author order.
    pub first_pass: Vec<OptionCount>,
    /// Later choices made after the fork was already satisfied.
    pub additional_views: Vec<OptionCount>,
    /// Shannon entropy of `first_pass` divided by ln(option count): 0 when
    /// every viewer chose the same option, 1 for an even split.
    pub controversy: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConsensusReport {
    pub sessions: usize,
    pub forks: Vec<ForkConsensus>,
}

/// Normalized Shannon entropy of a count distribution over `k` categories.
pub(crate) fn normalized_entropy(counts: impl IntoIterator<Item = u64>, k: usize) -> f64 {
    let counts: Vec<u64> = counts.into_iter().collect();
    let total: u64 = counts.iter().sum();
    if total == 0 || k < 2 {
        return 0.0;
    }
    let h: f64 = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total as f64;
            -p * libm::log(p)
        })
        .sum();
    (h / libm::log(k as f64)).clamp(0.0, 1.0)
}

pub fn fork_consensus(
    project: &VideoProject,
    logs: &[SessionLog],
) -> Result<ConsensusReport, CorruptLog> {
    let mut first: BTreeMap<(&NodeId, &OptionId), u64> = BTreeMap::new();
    let mut later: BTreeMap<(&NodeId, &OptionId), u64> = BTreeMap::new();
    let states = logs
        .iter()
        .map(|log| replay(log, project))
        .collect::<Result<Vec<_>, _>>()?;
    for state in &states {
        for choice in &state.forks_taken {
            let bucket = if choice.first_pass { &mut first } else { &mut later };
            *bucket.entry((&choice.fork, &choice.option)).or_default() += 1;
        }
    }

    let forks = project
        .nodes
        .iter()
        .filter_map(|(id, node)| match node {
            Node::Fork(fork) => Some((id, fork)),
            _ => None,
        })
        .map(|(id, fork)| {
            let count = |table: &BTreeMap<(&NodeId, &OptionId), u64>| -> Vec<OptionCount> {
                fork.options
                    .iter()
                    .map(|o| OptionCount {
                        option: o.option_id.clone(),
                        count: table.get(&(id, &o.option_id)).copied().unwrap_or(0),
                    })
                    .collect()
            };
            let first_pass = count(&first);
            let controversy =
                normalized_entropy(first_pass.iter().map(|c| c.count), fork.options.len());
            ForkConsensus {
                fork: id.clone(),
                additional_views: count(&later),
                first_pass,
                controversy,
            }
        })
        .collect();
    Ok(ConsensusReport {
        sessions: logs.len(),
        forks,
    })
}
