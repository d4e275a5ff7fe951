use super::special::student_t_two_tailed;
use super::{check_finite, mean, sum_sq_dev, StatsError, TestKind, TestResult};

/// Two-sample Student's t with pooled variance, df = n_a + n_b - 2.
pub fn students_t_test(a: &[f64], b: &[f64]) -> Result<TestResult, StatsError> {
    let smallest = a.len().min(b.len());
    if smallest < 2 {
        return Err(StatsError::SampleTooSmall { needed: 2, got: smallest });
    }
    check_finite(a)?;
    check_finite(b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mean_a, mean_b) = (mean(a), mean(b));
    let df = na + nb - 2.0;
    let pooled = (sum_sq_dev(a, mean_a) + sum_sq_dev(b, mean_b)) / df;
    if pooled <= 0.0 {
        return Err(StatsError::DegenerateVariance);
    }
    let t = (mean_a - mean_b) / libm::sqrt(pooled * (1.0 / na + 1.0 / nb));
    let mut result = TestResult::new(TestKind::StudentT, t, student_t_two_tailed(t, df));
    result.df = Some(df);
    Ok(result)
}
