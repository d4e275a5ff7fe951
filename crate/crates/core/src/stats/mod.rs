//! Descriptive statistics and the three hypothesis tests used to compare
//! viewer groups: Shapiro–Wilk for normality, pooled-variance Student's t,
//! and Mann–Whitney U.

mod mann_whitney;
mod shapiro;
pub mod special;
mod summary;
mod ttest;

pub use mann_whitney::{mann_whitney_u, rank_sums, RankSums, EXACT_LIMIT};
pub use shapiro::shapiro_wilk;
pub use summary::{aggregate_group, GroupSummary};
pub use ttest::students_t_test;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("sample is empty")]
    EmptySample,
    #[error("sample too small: need at least {needed}, got {got}")]
    SampleTooSmall { needed: usize, got: usize },
    #[error("sample too large: at most {limit} values, got {got}")]
    SampleTooLarge { limit: usize, got: usize },
    #[error("all values in the sample are identical")]
    ConstantSample,
    #[error("pooled variance is zero")]
    DegenerateVariance,
    #[error("sample contains a non-finite value")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TestKind {
    ShapiroWilk,
    StudentT,
    MannWhitneyU,
}

impl TestKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TestKind::ShapiroWilk => "shapiro_wilk",
            TestKind::StudentT => "student_t",
            TestKind::MannWhitneyU => "mann_whitney_u",
        }
    }
}

/// Outcome of one test. `df` is set for Student's t only; `u` and `z` for
/// Mann–Whitney only. `p_exact` carries the full-enumeration Mann–Whitney
/// p-value when the pooled sample is small enough.
#[derive(Debug, Clone, PartialEq)]
pub struct TestResult {
    pub test: TestKind,
    pub statistic: f64,
    pub df: Option<f64>,
    pub u: Option<f64>,
    pub z: Option<f64>,
    pub p_two_tailed: f64,
    pub p_exact: Option<f64>,
}

impl TestResult {
    fn new(test: TestKind, statistic: f64, p: f64) -> Self {
        Self {
            test,
            statistic,
            df: None,
            u: None,
            z: None,
            p_two_tailed: p.clamp(0.0, 1.0),
            p_exact: None,
        }
    }
}

fn check_finite(values: &[f64]) -> Result<(), StatsError> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(StatsError::NonFinite)
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sum of squared deviations from the mean.
fn sum_sq_dev(values: &[f64], mean: f64) -> f64 {
    values.iter().map(|v| (v - mean) * (v - mean)).sum()
}
