//! Whole-problem laws: split position, slack, greedy, LP and eligible-first.
//!
//! Floating point throughout; binomial ratios go through log space so the
//! same code serves capacities in the thousands.

use alloc::vec;
use alloc::vec::Vec;

use core::f64::consts::E;

use super::{pow1p, AnalyticsError};
use crate::combinatorics::log_binom;

/// `P(S = s) = (s-1)/delta^s * C(delta+1, s)`; zero outside `2..=delta+1`.
pub fn split_probability(delta: u64, s: u64) -> f64 {
    if s < 2 || s > delta + 1 {
        return 0.0;
    }
    let d = delta as f64;
    libm::exp(libm::log((s - 1) as f64) - s as f64 * libm::log(d) + log_binom(delta + 1, s))
}

/// Indexed by split position `0..=delta+1`.
pub fn split_distribution(delta: u64) -> Vec<f64> {
    (0..=delta + 1)
        .map(|s| split_probability(delta, s))
        .collect()
}

pub fn split_mean(delta: u64) -> f64 {
    pow1p(1.0 / delta as f64, delta as f64)
}

pub fn split_var(delta: u64) -> f64 {
    let d = delta as f64;
    (3.0 + 1.0 / d) * pow1p(1.0 / d, d - 1.0) - pow1p(1.0 / d, 2.0 * d)
}

/// `P(K = k) = (delta-k)/delta^2 * (1+1/delta)^(delta-k-1)`.
pub fn slack_probability(delta: u64, k: u64) -> f64 {
    if k >= delta {
        return 0.0;
    }
    let d = delta as f64;
    (d - k as f64) / (d * d) * pow1p(1.0 / d, (delta - k - 1) as f64)
}

/// Indexed by slack `0..=delta`.
pub fn slack_distribution(delta: u64) -> Vec<f64> {
    (0..=delta).map(|k| slack_probability(delta, k)).collect()
}

/// Closed-form mean slack at a real capacity.
pub fn slack_mean_real(c: f64) -> f64 {
    let a = |n: f64| pow1p(1.0 / c, n);
    -(c + 1.0) / c * (a(c) - 1.0) + (c + 3.0) * (a(c + 1.0) - (2.0 * c + 1.0) / c)
        - 2.0 * c * (a(c + 2.0) - (5.0 * c * c + 7.0 * c + 2.0) / (2.0 * c * c))
}

pub fn slack_mean(delta: u64) -> f64 {
    slack_mean_real(delta as f64)
}

pub fn slack_mean_given_split(delta: u64, s: u64) -> f64 {
    (delta + 1 - s) as f64 / (s + 1) as f64
}

/// Mean of any packed weight `W(j)`, `j < s`, given the split position.
pub fn weight_mean_given_split(delta: u64, s: u64) -> f64 {
    let (d, s) = (delta as f64, s as f64);
    (d * s + s - 1.0) / (s * s - 1.0)
}

/// Split position and slack jointly; zero outside the support.
pub fn joint_slack_split(delta: u64, k: u64, s: u64) -> f64 {
    joint_checked(delta, k, s).unwrap_or(0.0)
}

pub fn joint_checked(delta: u64, k: u64, s: u64) -> Result<f64, AnalyticsError> {
    if s < 2 || s > delta + 1 || k + s > delta + 1 {
        return Err(AnalyticsError::OutOfRange { delta, k, s });
    }
    let free = delta - k;
    let d = delta as f64;
    Ok(libm::exp(
        libm::log(free as f64) - s as f64 * libm::log(d) + log_binom(free - 1, s - 2),
    ))
}

pub fn greedy_mean_given_split(delta: u64, s: u64) -> f64 {
    let (d, s) = (delta as f64, s as f64);
    (2.0 * d - s + 4.0) / 4.0 * (d * s + s - 1.0) / (s + 1.0)
}

pub fn greedy_mean(delta: u64) -> f64 {
    let d = delta as f64;
    let a = |n: f64| pow1p(1.0 / d, n);
    -(d + 1.0) * (d + 1.0) / (4.0 * d) * a(d - 1.0)
        + (2.0 * d + 3.0) * (d + 2.0) * (d + 1.0) / (4.0 * d) * (a(d) - 1.0)
        - (d + 2.0) * (d + 2.0) * (a(d + 1.0) - (2.0 * d + 1.0) / d)
        + (2.0 * d + 5.0) / 2.0 * d * (a(d + 2.0) - (5.0 * d * d + 7.0 * d + 2.0) / (2.0 * d * d))
}

/// Greedy mean as the split-weighted sum of its conditional means.
pub fn greedy_mean_sum(delta: u64) -> f64 {
    (2..=delta + 1)
        .map(|s| greedy_mean_given_split(delta, s) * split_probability(delta, s))
        .sum()
}

pub fn lp_mean(delta: u64) -> f64 {
    let d = delta as f64;
    let a = |n: f64| pow1p(1.0 / d, n);
    -(d + 1.0) * (d - 1.0) / (4.0 * d) * a(d - 1.0)
        + (2.0 * d - 1.0) * (d + 2.0) * (d + 1.0) / (4.0 * d) * (a(d) - 1.0)
        - (d + 2.0) * (d - 1.0) / 2.0 * (a(d + 1.0) - (2.0 * d + 1.0) / d)
        - d / 2.0 * (a(d + 2.0) - (5.0 * d * d + 7.0 * d + 2.0) / (2.0 * d * d))
}

/// Mean fractional profit on top of greedy: slack times the split item's
/// mean efficiency, summed over split positions.
pub fn lp_gain_sum(delta: u64) -> f64 {
    let items = delta + 1;
    (2..=items)
        .map(|s| {
            slack_mean_given_split(delta, s) * (items - s + 1) as f64 / 2.0
                * split_probability(delta, s)
        })
        .sum()
}

/// Mean eligible-first gain given slack `k` and split `s`, at real
/// arguments. The later items each fit with chance `k/delta`; the first
/// that fits is taken.
pub fn ef_conditional_real(delta: f64, k: f64, s: f64) -> f64 {
    if k <= 0.0 {
        return 0.0;
    }
    let miss = 1.0 - k / delta;
    let tail = delta - s + 1.0;
    k / 4.0 * tail * (1.0 - libm::pow(miss, tail))
        - delta / 4.0 * miss * (1.0 - (1.0 + (delta - s) * k / delta) * libm::pow(miss, delta - s))
}

pub fn ef_conditional(delta: u64, k: u64, s: u64) -> f64 {
    if k == 0 || s > delta {
        return 0.0;
    }
    ef_conditional_real(delta as f64, k as f64, s as f64)
}

/// The same conditional gain summed item by item.
pub fn ef_conditional_sum(delta: u64, k: u64, s: u64) -> f64 {
    let items = delta + 1;
    let hit = k as f64 / delta as f64;
    let mut miss_run = 1.0;
    let mut total = 0.0;
    for i in s + 1..=items {
        total += (items - i + 1) as f64 / 2.0 * k as f64 / 2.0 * hit * miss_run;
        miss_run *= 1.0 - hit;
    }
    total
}

pub fn ef_mean_exact(delta: u64) -> f64 {
    let mut gain = 0.0;
    for s in 2..=delta + 1 {
        for k in 1..=delta + 1 - s {
            gain += ef_conditional(delta, k, s) * joint_slack_split(delta, k, s);
        }
    }
    greedy_mean(delta) + gain
}

/// Eligible-first mean with the slack and split replaced by their means.
pub fn ef_mean_approx(delta: u64) -> f64 {
    greedy_mean(delta) + ef_conditional_real(delta as f64, slack_mean(delta), split_mean(delta))
}

/// `100 |approx - exact| / exact`.
pub fn ef_approx_deviation(delta: u64) -> f64 {
    let exact = ef_mean_exact(delta);
    100.0 * (ef_mean_approx(delta) - exact).abs() / exact
}

/// `(E ceil(K/2), E floor(K/2))`.
pub fn ceil_floor_half_slack(delta: u64) -> (f64, f64) {
    let odd: f64 = (1..=delta)
        .step_by(2)
        .map(|k| slack_probability(delta, k))
        .sum();
    let mean = slack_mean(delta);
    ((mean + odd) / 2.0, (mean - odd) / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Asymptotics {
    pub e_split: f64,
    pub var_split: f64,
    pub slack_ratio: f64,
    pub lp_approx_ratio: f64,
    pub greedy_lp_ratio: f64,
    pub post_greedy_lp_ratio: f64,
}

impl Asymptotics {
    pub fn limits() -> Self {
        Asymptotics {
            e_split: E,
            var_split: 3.0 * E - E * E,
            slack_ratio: 3.0 - E,
            lp_approx_ratio: 1.0,
            greedy_lp_ratio: E - 2.0,
            post_greedy_lp_ratio: 3.0 - E,
        }
    }

    pub fn as_array(&self) -> [f64; 6] {
        [
            self.e_split,
            self.var_split,
            self.slack_ratio,
            self.lp_approx_ratio,
            self.greedy_lp_ratio,
            self.post_greedy_lp_ratio,
        ]
    }
}

pub fn asymptotics(delta: u64) -> Asymptotics {
    let d = delta as f64;
    let e_split = split_mean(delta);
    let e_slack = slack_mean(delta);
    let greedy = greedy_mean(delta);
    let lp = lp_mean(delta);
    let post = (d - e_split + 1.0) / 2.0 * e_slack;
    Asymptotics {
        e_split,
        var_split: split_var(delta),
        slack_ratio: e_slack / d,
        lp_approx_ratio: (greedy + post) / lp,
        greedy_lp_ratio: greedy / lp,
        post_greedy_lp_ratio: post / lp,
    }
}

/// Total probability mass of the joint law, for normalization checks.
pub fn joint_mass(delta: u64) -> f64 {
    let mut total = 0.0;
    for s in 2..=delta + 1 {
        for k in 0..=delta + 1 - s {
            total += joint_slack_split(delta, k, s);
        }
    }
    total
}

/// `(x, y)` series of the split pmf, handy for plotting.
pub fn split_series(delta: u64) -> Vec<(f64, f64)> {
    let p = split_distribution(delta);
    let mut out = vec![];
    for (s, &prob) in p.iter().enumerate().skip(2) {
        out.push((s as f64, prob));
    }
    out
}
