//! Mann–Whitney U with average ranks for ties.
//!
//! The reported p-value uses the normal approximation with a tie-corrected
//! variance and a 0.5 continuity correction toward the mean. For pooled
//! samples of at most [`EXACT_LIMIT`] values the exact permutation p-value
//! is computed alongside by enumerating every labelling of the pooled ranks.

use alloc::vec::Vec;

use super::special::normal_cdf;
use super::{check_finite, StatsError, TestKind, TestResult};

/// Largest pooled sample size for which the exact p-value is enumerated.
pub const EXACT_LIMIT: usize = 20;

/// Rank sums of both samples over the pooled ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct RankSums {
    pub rank_sum_a: f64,
    pub rank_sum_b: f64,
    /// Sum of t^3 - t over tie groups of size t.
    pub tie_term: f64,
    /// Pooled ranks, sample `a` first, then `b`, each in input order.
    pub ranks: Vec<f64>,
}

impl RankSums {
    pub fn u_a(&self, na: usize) -> f64 {
        self.rank_sum_a - (na * (na + 1)) as f64 / 2.0
    }

    pub fn u_b(&self, nb: usize) -> f64 {
        self.rank_sum_b - (nb * (nb + 1)) as f64 / 2.0
    }
}

pub fn rank_sums(a: &[f64], b: &[f64]) -> RankSums {
    let mut pooled: Vec<(f64, usize)> = a.iter().chain(b).copied().zip(0..).collect();
    pooled.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut ranks = alloc::vec![0.0; pooled.len()];
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < pooled.len() {
        let mut j = i + 1;
        while j < pooled.len() && pooled[j].0 == pooled[i].0 {
            j += 1;
        }
        // 1-based ranks i+1 ..= j share their average.
        let average = (i + 1 + j) as f64 / 2.0;
        for &(_, original) in &pooled[i..j] {
            ranks[original] = average;
        }
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        i = j;
    }
    let rank_sum_a = ranks[..a.len()].iter().sum();
    let rank_sum_b = ranks[a.len()..].iter().sum();
    RankSums {
        rank_sum_a,
        rank_sum_b,
        tie_term,
        ranks,
    }
}

pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<TestResult, StatsError> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::EmptySample);
    }
    check_finite(a)?;
    check_finite(b)?;
    let (na, nb) = (a.len(), b.len());
    let sums = rank_sums(a, b);
    let u_a = sums.u_a(na);
    let u_b = sums.u_b(nb);
    let u = u_a.min(u_b);

    let n = (na + nb) as f64;
    let mean = (na * nb) as f64 / 2.0;
    let variance = (na * nb) as f64 / 12.0 * ((n + 1.0) - sums.tie_term / (n * (n - 1.0)));
    let (z, p) = if variance > 0.0 {
        // U is the smaller statistic, so U + 0.5 moves toward the mean; it
        // never crosses it.
        let z = (u + 0.5 - mean).min(0.0) / libm::sqrt(variance);
        (z, 2.0 * normal_cdf(z))
    } else {
        (0.0, 1.0)
    };

    let mut result = TestResult::new(TestKind::MannWhitneyU, u, p);
    result.u = Some(u);
    result.z = Some(z);
    if na + nb <= EXACT_LIMIT {
        result.p_exact = Some(exact_p(&sums.ranks, na, u_a));
    }
    Ok(result)
}

/// Fraction of all C(n, n_a) labellings whose U_a is at least as far from
/// the mean as the observed one.
fn exact_p(ranks: &[f64], na: usize, observed_u_a: f64) -> f64 {
    let n = ranks.len();
    let nb = n - na;
    let mean = (na * nb) as f64 / 2.0;
    let offset = (na * (na + 1)) as f64 / 2.0;
    let observed = (observed_u_a - mean).abs() - 1e-9;
    let (mut extreme, mut total) = (0u64, 0u64);
    // Gosper's hack walks every n-bit mask with exactly `na` bits set.
    let mut mask: u32 = (1u32 << na) - 1;
    let limit: u32 = 1u32 << n;
    while mask < limit {
        let rank_sum: f64 = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| ranks[i]).sum();
        if (rank_sum - offset - mean).abs() >= observed {
            extreme += 1;
        }
        total += 1;
        let lowest = mask & mask.wrapping_neg();
        let ripple = mask + lowest;
        mask = (((ripple ^ mask) >> 2) / lowest) | ripple;
    }
    extreme as f64 / total as f64
}
