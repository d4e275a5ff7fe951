//! Cross-session analysis: group comparison, fork consensus, viewer
//! annotation digests and the data behind export bundles.

mod compare;
mod consensus;
mod digest;
mod export;

pub use compare::{
    compare_groups, compare_metric, ComparisonReport, Metric, MetricComparison, Normality, DEFAULT_ALPHA,
};
pub use consensus::{fork_consensus, ConsensusReport, ForkConsensus, OptionCount};
pub use digest::{annotation_digest, DigestEntry, DigestGroup};
pub use export::{build_bundle, ExportBundle, ForkTally, OptionTally, QuestionTally, SessionExport};
