//! Shapiro–Wilk W test following Royston's AS R94: approximate coefficients
//! from normal order statistics and a normalizing transformation of W for
//! the p-value (separate fits for n <= 11 and n >= 12).

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

use super::special::{normal_quantile, normal_sf};
use super::{check_finite, mean, sum_sq_dev, StatsError, TestKind, TestResult};

const MAX_N: usize = 5000;

const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056];
const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
const C3: [f64; 4] = [0.5440, -0.39978, 0.025054, -6.714e-4];
const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];
const G: [f64; 2] = [-2.273, 0.459];

/// c[0] + c[1] x + c[2] x^2 + ...
fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

/// Coefficients for the upper half of the order statistics, largest first.
fn coefficients(n: usize) -> Vec<f64> {
    let half = n / 2;
    if n == 3 {
        return alloc::vec![FRAC_1_SQRT_2];
    }
    let an = n as f64;
    let m: Vec<f64> = (0..half)
        .map(|i| -normal_quantile((i as f64 + 1.0 - 0.375) / (an + 0.25)))
        .collect();
    let summ2 = 2.0 * m.iter().map(|v| v * v).sum::<f64>();
    let ssumm2 = libm::sqrt(summ2);
    let rsn = 1.0 / libm::sqrt(an);
    let a1 = poly(&C1, rsn) + m[0] / ssumm2;
    let mut a = Vec::with_capacity(half);
    if n > 5 {
        let a2 = m[1] / ssumm2 + poly(&C2, rsn);
        let fac = libm::sqrt(
            (summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1])
                / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2),
        );
        a.push(a1);
        a.push(a2);
        a.extend(m[2..].iter().map(|v| v / fac));
    } else {
        let fac = libm::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
        a.push(a1);
        a.extend(m[1..].iter().map(|v| v / fac));
    }
    a
}

fn p_value(w: f64, n: usize) -> f64 {
    if n == 3 {
        let w = w.max(0.75);
        return (1.0 - 6.0 / PI * libm::acos(libm::sqrt(w))).clamp(0.0, 1.0);
    }
    let w1 = 1.0 - w;
    if w1 <= 0.0 {
        return 1.0;
    }
    let y = libm::log(w1);
    let an = n as f64;
    if n <= 11 {
        let gamma = poly(&G, an);
        if y >= gamma {
            return 1e-19;
        }
        let y = -libm::log(gamma - y);
        let m = poly(&C3, an);
        let s = libm::exp(poly(&C4, an));
        normal_sf((y - m) / s)
    } else {
        let ln_n = libm::log(an);
        let m = poly(&C5, ln_n);
        let s = libm::exp(poly(&C6, ln_n));
        normal_sf((y - m) / s)
    }
}

pub fn shapiro_wilk(sample: &[f64]) -> Result<TestResult, StatsError> {
    let n = sample.len();
    if n < 3 {
        return Err(StatsError::SampleTooSmall { needed: 3, got: n });
    }
    if n > MAX_N {
        return Err(StatsError::SampleTooLarge { limit: MAX_N, got: n });
    }
    check_finite(sample)?;
    let mut x = sample.to_vec();
    x.sort_by(f64::total_cmp);
    if x[n - 1] - x[0] == 0.0 {
        return Err(StatsError::ConstantSample);
    }
    let a = coefficients(n);
    let b: f64 = a
        .iter()
        .enumerate()
        .map(|(i, ai)| ai * (x[n - 1 - i] - x[i]))
        .sum();
    let ss = sum_sq_dev(&x, mean(&x));
    let w = (b * b / ss).min(1.0);
    Ok(TestResult::new(TestKind::ShapiroWilk, w, p_value(w, n)))
}
