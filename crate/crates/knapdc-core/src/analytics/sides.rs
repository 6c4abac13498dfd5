//! Left and right subproblems of one odd/even split.
//!
//! The side laws reuse the whole-problem formulas at a real capacity, the
//! mean side capacity.

use super::whole::{slack_mean_real, split_probability};
use super::{pow1p, AnalyticsError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum CapacityForm {
    /// The true mean side capacities.
    Exact,
    /// Left mean lowered by one half. The reference performance values
    /// were computed with this convention.
    Tabulated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Half {
    Left,
    Right,
}

/// `(E C_left, E C_right)`; needs an odd capacity (even item count).
pub fn capacities_mean(delta: u64, form: CapacityForm) -> Result<(f64, f64), AnalyticsError> {
    if delta.is_multiple_of(2) {
        return Err(AnalyticsError::OddItemCount { delta });
    }
    let d = delta as f64;
    let items = d + 1.0;
    let up = |n: f64| pow1p(1.0 / d, n);
    let down = |n: f64| pow1p(-1.0 / d, n);
    // half the chance of an odd slack
    let odd_half: f64 = (2..=delta)
        .step_by(2)
        .map(|m| m as f64 * up(m as f64 - 1.0))
        .sum::<f64>()
        / (2.0 * d * d);
    let mut left = d / 2.0 + odd_half + items / 4.0 * (up(items) + down(items))
        - d / 4.0 * (up(items + 1.0) - down(items + 1.0))
        + 0.5;
    if form == CapacityForm::Tabulated {
        left -= 0.5;
    }
    Ok((left, d - left))
}

/// `(E S_side, E K_side)` at a real side capacity. A zero capacity packs nothing.
pub fn side_split_slack_approx(c: f64) -> (f64, f64) {
    if c <= 0.0 {
        return (1.0, 0.0);
    }
    (pow1p(1.0 / c, c), slack_mean_real(c))
}

fn offset(half: Half) -> f64 {
    match half {
        Half::Left => 2.0,
        Half::Right => 1.0,
    }
}

/// Mean side greedy profit at side capacity `c`, parent item count `items`.
pub fn side_greedy_mean(c: f64, items: u64, half: Half) -> f64 {
    if c <= 0.0 {
        return 0.0;
    }
    let mu = items as f64;
    let b = |n: f64| pow1p(1.0 / c, n);
    let (m, constant) = match half {
        Half::Left => (mu + 3.0, (2.0 * mu * c + 6.0 * c + 3.0 * mu + 10.0) / 2.0),
        Half::Right => (mu + 2.0, (2.0 * mu * c + 4.0 * c + 3.0 * mu + 7.0) / 2.0),
    };
    let bracket = b(c + 2.0) - 1.0 - (c + 2.0) / c - (c + 1.0) * (c + 2.0) / (2.0 * c * c);
    -c / 2.0 * b(c + 1.0) - m * (c + 2.0) / 2.0 * (b(c + 1.0) - (c + 1.0) / c)
        + constant
        + c * m * bracket
}

/// The same mean as a sum over side split positions, integer `c` only.
pub fn side_greedy_mean_sum(c: u64, items: u64, half: Half) -> f64 {
    let cf = c as f64;
    (2..=c + 1)
        .map(|s| {
            let sf = s as f64;
            (items as f64 - sf + offset(half)) / 2.0 * (sf * cf + sf - 1.0) / (sf + 1.0)
                * split_probability(c, s)
        })
        .sum()
}

/// Side eligible-first mean: side greedy plus the eligible-first gain over
/// the `items/2` side items, at the side's mean split and slack.
pub fn side_ef_mean(c: f64, items: u64, half: Half) -> f64 {
    if c <= 0.0 {
        return 0.0;
    }
    let mu = items as f64;
    let side_items = mu / 2.0;
    let (s, k) = side_split_slack_approx(c);
    let miss = 1.0 - k / c;
    let lead = match half {
        Half::Left => mu - 2.0 * s,
        Half::Right => mu - 2.0 * s - 1.0,
    };
    let gain = k / 4.0 * lead * (1.0 - libm::pow(miss, side_items - s))
        - c / 2.0
            * miss
            * (1.0
                - (1.0 + (side_items - s - 1.0) * k / c) * libm::pow(miss, side_items - s - 1.0));
    side_greedy_mean(c, items, half) + gain
}

/// Side LP mean: side greedy plus mean slack times the split item's mean
/// efficiency in the parent ordering.
pub fn side_lp_mean(c: f64, items: u64, half: Half) -> f64 {
    if c <= 0.0 {
        return 0.0;
    }
    let mu = items as f64;
    let (s, k) = side_split_slack_approx(c);
    let efficiency = (mu - 2.0 * s + offset(half)) / 2.0;
    side_greedy_mean(c, items, half) + k * efficiency
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SideExpectations {
    pub form: CapacityForm,
    pub e_cap_left: f64,
    pub e_cap_right: f64,
    pub e_split_left: f64,
    pub e_split_right: f64,
    pub e_slack_left: f64,
    pub e_slack_right: f64,
    pub e_greedy_left: f64,
    pub e_greedy_right: f64,
    pub ef_left: f64,
    pub ef_right: f64,
    pub lp_left: f64,
    pub lp_right: f64,
}

impl SideExpectations {
    pub fn new(delta: u64, form: CapacityForm) -> Result<Self, AnalyticsError> {
        let (cl, cr) = capacities_mean(delta, form)?;
        let items = delta + 1;
        let (e_split_left, e_slack_left) = side_split_slack_approx(cl);
        let (e_split_right, e_slack_right) = side_split_slack_approx(cr);
        Ok(SideExpectations {
            form,
            e_cap_left: cl,
            e_cap_right: cr,
            e_split_left,
            e_split_right,
            e_slack_left,
            e_slack_right,
            e_greedy_left: side_greedy_mean(cl, items, Half::Left),
            e_greedy_right: side_greedy_mean(cr, items, Half::Right),
            ef_left: side_ef_mean(cl, items, Half::Left),
            ef_right: side_ef_mean(cr, items, Half::Right),
            lp_left: side_lp_mean(cl, items, Half::Left),
            lp_right: side_lp_mean(cr, items, Half::Right),
        })
    }
}
