//! Closed-form expectations for the uniform random model, their exact
//! rational counterparts and the performance estimates built on them.

pub mod exact;
pub mod performance;
pub mod sides;
pub mod whole;

use alloc::vec::Vec;

use thiserror::Error;

pub use performance::{
    full_tree_markers, performance_params, tree_performance, vertex_factors, PerformanceParams,
    TreeEstimate,
};
pub use sides::{
    capacities_mean, side_ef_mean, side_greedy_mean, side_greedy_mean_sum, side_lp_mean,
    side_split_slack_approx, CapacityForm, Half, SideExpectations,
};
pub use whole::*;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyticsError {
    #[error("capacity {delta} is even, so the item count is odd")]
    OddItemCount { delta: u64 },
    #[error("(k={k}, s={s}) lies outside the support for capacity {delta}")]
    OutOfRange { delta: u64, k: u64, s: u64 },
    #[error("enumeration of {delta}^{items} tuples is too large")]
    TooLarge { delta: u64, items: u64 },
}

/// `(1 + x)^n` through `ln_1p`, accurate for small `x` and large `n`.
pub(crate) fn pow1p(x: f64, n: f64) -> f64 {
    libm::exp(n * libm::log1p(x))
}

/// Every closed-form quantity at one capacity.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ExpectationReport {
    pub delta: u64,
    /// Indexed by split position, entries 0 and 1 are zero.
    pub p_split: Vec<f64>,
    pub e_split: f64,
    pub var_split: f64,
    /// Indexed by slack.
    pub p_slack: Vec<f64>,
    pub e_slack: f64,
    /// Indexed by split position.
    pub e_slack_given_split: Vec<f64>,
    pub e_weight_given_split: Vec<f64>,
    pub e_greedy_given_split: Vec<f64>,
    pub e_greedy: f64,
    pub e_lp: f64,
    pub e_ef_exact: f64,
    pub ef_approx: f64,
    pub e_ceil_half_slack: f64,
    pub e_floor_half_slack: f64,
    /// Largest gap between a joint-law marginal and the matching pmf.
    pub joint_marginal_gap: f64,
    /// Present for odd capacities only.
    pub sides: Option<SideExpectations>,
}

impl ExpectationReport {
    pub fn new(delta: u64) -> Self {
        let p_split = split_distribution(delta);
        let p_slack = slack_distribution(delta);
        let items = delta + 1;
        let per_split = |f: &dyn Fn(u64) -> f64| -> Vec<f64> {
            (0..=items)
                .map(|s| if s >= 2 { f(s) } else { 0.0 })
                .collect()
        };
        let (e_ceil_half_slack, e_floor_half_slack) = ceil_floor_half_slack(delta);
        ExpectationReport {
            delta,
            e_split: split_mean(delta),
            var_split: split_var(delta),
            e_slack: slack_mean(delta),
            e_slack_given_split: per_split(&|s| slack_mean_given_split(delta, s)),
            e_weight_given_split: per_split(&|s| weight_mean_given_split(delta, s)),
            e_greedy_given_split: per_split(&|s| greedy_mean_given_split(delta, s)),
            e_greedy: greedy_mean(delta),
            e_lp: lp_mean(delta),
            e_ef_exact: ef_mean_exact(delta),
            ef_approx: ef_mean_approx(delta),
            e_ceil_half_slack,
            e_floor_half_slack,
            joint_marginal_gap: joint_marginal_gap(delta, &p_split, &p_slack),
            sides: SideExpectations::new(delta, CapacityForm::Exact).ok(),
            p_split,
            p_slack,
        }
    }
}

fn joint_marginal_gap(delta: u64, p_split: &[f64], p_slack: &[f64]) -> f64 {
    let mut by_split = alloc::vec![0.0; p_split.len()];
    let mut by_slack = alloc::vec![0.0; p_slack.len()];
    for s in 2..=delta + 1 {
        for k in 0..=delta + 1 - s {
            let p = joint_slack_split(delta, k, s);
            by_split[s as usize] += p;
            by_slack[k as usize] += p;
        }
    }
    let a = by_split.iter().zip(p_split).map(|(x, y)| (x - y).abs());
    let b = by_slack.iter().zip(p_slack).map(|(x, y)| (x - y).abs());
    a.chain(b).fold(0.0, f64::max)
}
