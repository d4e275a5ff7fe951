use alloc::vec::Vec;

use crate::session::SessionMetrics;
use crate::stats::{
    aggregate_group, mann_whitney_u, shapiro_wilk, students_t_test, GroupSummary, StatsError,
    TestKind, TestResult,
};

pub const DEFAULT_ALPHA: f64 = 0.05;

/// Dependent variables compared between groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    /// Correct answers relative to the project's question count.
    CorrectRatio,
    TimeSpent,
    OptionalInteractions,
    BranchPathsSeen,
    Comments,
}

impl Metric {
    pub const ALL: [Metric; 5] = [
        Metric::CorrectRatio,
        Metric::TimeSpent,
        Metric::OptionalInteractions,
        Metric::BranchPathsSeen,
        Metric::Comments,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::CorrectRatio => "correct_ratio",
            Metric::TimeSpent => "time_spent_ms",
            Metric::OptionalInteractions => "optional_interactions",
            Metric::BranchPathsSeen => "branch_paths_seen",
            Metric::Comments => "comments",
        }
    }

    pub fn value(self, m: &SessionMetrics) -> f64 {
        match self {
            Metric::CorrectRatio => m.correct_ratio(),
            Metric::TimeSpent => m.time_spent_ms as f64,
            Metric::OptionalInteractions => m.optional_interactions as f64,
            Metric::BranchPathsSeen => m.branch_paths_seen as f64,
            Metric::Comments => m.comments as f64,
        }
    }
}

/// Outcome of the normality check for one group. A constant sample has no
/// defined Shapiro–Wilk statistic and is treated as not normal.
#[derive(Debug, Clone, PartialEq)]
pub enum Normality {
    Tested(TestResult),
    Constant,
}

impl Normality {
    pub fn p_value(&self) -> Option<f64> {
        match self {
            Normality::Tested(r) => Some(r.p_two_tailed),
            Normality::Constant => None,
        }
    }

    /// Normal at level `alpha`: the null of normality is not rejected.
    pub fn is_normal(&self, alpha: f64) -> bool {
        self.p_value().is_some_and(|p| p > alpha)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricComparison {
    pub metric: Metric,
    pub group_a: GroupSummary,
    pub group_b: GroupSummary,
    pub normality_a: Normality,
    pub normality_b: Normality,
    pub chosen_test: TestKind,
    pub result: TestResult,
    pub significant_at_alpha: bool,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub alpha: f64,
    pub metrics: Vec<MetricComparison>,
}

impl ComparisonReport {
    pub fn get(&self, metric: Metric) -> Option<&MetricComparison> {
        self.metrics.iter().find(|m| m.metric == metric)
    }
}

fn normality(values: &[f64]) -> Result<Normality, StatsError> {
    match shapiro_wilk(values) {
        Ok(r) => Ok(Normality::Tested(r)),
        Err(StatsError::ConstantSample) => Ok(Normality::Constant),
        Err(e) => Err(e),
    }
}

/// Compares one metric between two groups: Student's t when both groups
/// pass the normality check at `alpha`, Mann–Whitney U otherwise.
pub fn compare_metric(
    metric: Metric,
    a: &[f64],
    b: &[f64],
    alpha: f64,
) -> Result<MetricComparison, StatsError> {
    let smallest = a.len().min(b.len());
    if smallest < 3 {
        return Err(StatsError::SampleTooSmall { needed: 3, got: smallest });
    }
    let normality_a = normality(a)?;
    let normality_b = normality(b)?;
    let chosen_test = if normality_a.is_normal(alpha) && normality_b.is_normal(alpha) {
        TestKind::StudentT
    } else {
        TestKind::MannWhitneyU
    };
    let result = match chosen_test {
        TestKind::StudentT => students_t_test(a, b)?,
        _ => mann_whitney_u(a, b)?,
    };
    Ok(MetricComparison {
        metric,
        group_a: aggregate_group(a, metric.as_str())?,
        group_b: aggregate_group(b, metric.as_str())?,
        normality_a,
        normality_b,
        chosen_test,
        significant_at_alpha: result.p_two_tailed < alpha,
        result,
        alpha,
    })
}

pub fn compare_groups(
    group_a: &[SessionMetrics],
    group_b: &[SessionMetrics],
    alpha: f64,
) -> Result<ComparisonReport, StatsError> {
    let metrics = Metric::ALL
        .iter()
        .map(|&metric| {
            let a: Vec<f64> = group_a.iter().map(|m| metric.value(m)).collect();
            let b: Vec<f64> = group_b.iter().map(|m| metric.value(m)).collect();
            compare_metric(metric, &a, &b, alpha)
        })
        .collect::<Result<_, _>>()?;
    Ok(ComparisonReport { alpha, metrics })
}
