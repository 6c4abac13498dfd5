//! Percentage performance of one split, and tree estimates built by
//! multiplying side factors along each leaf's path.

use alloc::vec;
use alloc::vec::Vec;

use super::sides::{CapacityForm, SideExpectations};
use super::whole::{ef_mean_exact, lp_mean};
use super::AnalyticsError;
use crate::dnc::Side;

/// Side and total percentages for one split. Totals are the side sums.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PerformanceParams {
    pub rho_ef: f64,
    pub rho_ef_lt: f64,
    pub rho_ef_rt: f64,
    pub rho_lp: f64,
    pub rho_lp_lt: f64,
    pub rho_lp_rt: f64,
    pub lb_gr: f64,
    pub lb_gr_lt: f64,
    pub lb_gr_rt: f64,
    pub lb_ef: f64,
    pub lb_ef_lt: f64,
    pub lb_ef_rt: f64,
}

impl PerformanceParams {
    /// Build from side values only.
    pub fn from_sides(
        rho_ef: [f64; 2],
        rho_lp: [f64; 2],
        lb_gr: [f64; 2],
        lb_ef: [f64; 2],
    ) -> Self {
        PerformanceParams {
            rho_ef: rho_ef[0] + rho_ef[1],
            rho_ef_lt: rho_ef[0],
            rho_ef_rt: rho_ef[1],
            rho_lp: rho_lp[0] + rho_lp[1],
            rho_lp_lt: rho_lp[0],
            rho_lp_rt: rho_lp[1],
            lb_gr: lb_gr[0] + lb_gr[1],
            lb_gr_lt: lb_gr[0],
            lb_gr_rt: lb_gr[1],
            lb_ef: lb_ef[0] + lb_ef[1],
            lb_ef_lt: lb_ef[0],
            lb_ef_rt: lb_ef[1],
        }
    }

    /// `[rho_ef, rho_lp, lb_gr, lb_ef]` for one side.
    pub fn side(&self, side: Side) -> [f64; 4] {
        match side {
            Side::Left => [self.rho_ef_lt, self.rho_lp_lt, self.lb_gr_lt, self.lb_ef_lt],
            Side::Right => [self.rho_ef_rt, self.rho_lp_rt, self.lb_gr_rt, self.lb_ef_rt],
        }
    }
}

pub fn performance_params(
    delta: u64,
    form: CapacityForm,
) -> Result<PerformanceParams, AnalyticsError> {
    let sides = SideExpectations::new(delta, form)?;
    let lp = lp_mean(delta);
    let ef = ef_mean_exact(delta);
    let pct = |x: f64, of: f64| 100.0 * x / of;
    Ok(PerformanceParams::from_sides(
        [pct(sides.ef_left, ef), pct(sides.ef_right, ef)],
        [pct(sides.lp_left, lp), pct(sides.lp_right, lp)],
        [pct(sides.e_greedy_left, lp), pct(sides.e_greedy_right, lp)],
        [pct(sides.ef_left, lp), pct(sides.ef_right, lp)],
    ))
}

/// The four estimates for a vertex or a tree, percentages.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TreeEstimate {
    pub rho_ef: f64,
    pub rho_lp: f64,
    pub lb_gr: f64,
    pub lb_ef: f64,
}

impl TreeEstimate {
    fn from_array(v: [f64; 4]) -> Self {
        TreeEstimate {
            rho_ef: v[0],
            rho_lp: v[1],
            lb_gr: v[2],
            lb_ef: v[3],
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.rho_ef, self.rho_lp, self.lb_gr, self.lb_ef]
    }
}

/// `100 * prod(side factor / 100)` along the marker; the root gives 100.
pub fn vertex_factors(marker: &[Side], params: &PerformanceParams) -> TreeEstimate {
    let mut acc = [1.0; 4];
    for &side in marker {
        for (a, f) in acc.iter_mut().zip(params.side(side)) {
            *a *= f / 100.0;
        }
    }
    TreeEstimate::from_array(acc.map(|a| 100.0 * a))
}

/// Leaf factors summed, then clamped below at 50.
pub fn tree_performance(leaf_markers: &[Vec<Side>], params: &PerformanceParams) -> TreeEstimate {
    let mut sum = [0.0; 4];
    for marker in leaf_markers {
        for (s, v) in sum
            .iter_mut()
            .zip(vertex_factors(marker, params).as_array())
        {
            *s += v;
        }
    }
    TreeEstimate::from_array(sum.map(|s| s.max(50.0)))
}

/// Leaf markers of the complete tree of the given height, left first.
pub fn full_tree_markers(height: usize) -> Vec<Vec<Side>> {
    let mut level = vec![Vec::new()];
    for _ in 0..height {
        level = level
            .into_iter()
            .flat_map(|m: Vec<Side>| {
                [Side::Left, Side::Right].map(|side| {
                    let mut next = m.clone();
                    next.push(side);
                    next
                })
            })
            .collect();
    }
    level
}
