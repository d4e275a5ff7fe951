use alloc::string::String;
use alloc::vec::Vec;

use super::{check_finite, mean, sum_sq_dev, StatsError};

/// Descriptive statistics for one metric of one group.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSummary {
    pub metric_name: String,
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (n - 1 denominator); 0 when `degenerate`.
    pub sample_sd: f64,
    pub min: f64,
    pub max: f64,
    pub values: Vec<f64>,
    /// Set when n = 1 and the standard deviation is undefined.
    pub degenerate: bool,
}

pub fn aggregate_group(values: &[f64], metric_name: &str) -> Result<GroupSummary, StatsError> {
    if values.is_empty() {
        return Err(StatsError::EmptySample);
    }
    check_finite(values)?;
    let n = values.len();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    let mean = mean(values);
    let degenerate = n == 1;
    let sample_sd = if degenerate {
        0.0
    } else {
        libm::sqrt(sum_sq_dev(values, mean) / (n - 1) as f64)
    };
    Ok(GroupSummary {
        metric_name: metric_name.into(),
        n,
        mean,
        median,
        sample_sd,
        min: sorted[0],
        max: sorted[n - 1],
        values: values.to_vec(),
        degenerate,
    })
}
