//! Greedy family, LP relaxation and exact DP on a subproblem.
//!
//! All algorithms work on relative positions inside the subproblem's index
//! list; decision vectors are indexed the same way.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::instance::{Instance, Subproblem};

/// DP table bound, in cells (items times capacity axis length).
pub const DEFAULT_DP_CELL_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("dp table needs {cells} cells, limit is {limit}")]
    CapacityOverflow { cells: u64, limit: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Greedy,
    ExtendedGreedy,
    EligibleFirst,
    FullGreedy,
    LpRelaxation,
    Dp,
}

impl Algorithm {
    /// Chain order: each objective is bounded by the next one
    /// (extended greedy and eligible-first are not comparable).
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Greedy,
        Algorithm::ExtendedGreedy,
        Algorithm::EligibleFirst,
        Algorithm::FullGreedy,
        Algorithm::Dp,
        Algorithm::LpRelaxation,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::Greedy => "gr",
            Algorithm::ExtendedGreedy => "eg",
            Algorithm::EligibleFirst => "ef",
            Algorithm::FullGreedy => "fg",
            Algorithm::LpRelaxation => "lp",
            Algorithm::Dp => "dp",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown algorithm tag {0:?}")]
pub struct UnknownAlgorithm(pub alloc::string::String);

impl FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.tag() == s)
            .ok_or_else(|| UnknownAlgorithm(s.into()))
    }
}

/// Result of the plain greedy pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreedyOutcome {
    /// 1-based relative position of the first item that does not fit;
    /// `len + 1` when every item fits.
    pub split: usize,
    pub packed_weight: u64,
    pub slack: u64,
    pub objective: f64,
}

impl GreedyOutcome {
    /// Number of items packed, i.e. relative positions `0..packed()`.
    pub fn packed(&self) -> usize {
        self.split - 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub algorithm: Algorithm,
    pub objective: f64,
    /// One entry per subproblem item; 0 or 1 except the LP split item.
    pub decisions: Vec<f64>,
    /// Greedy split and slack of the same subproblem, kept for reporting.
    pub split: usize,
    pub slack: u64,
}

impl Solution {
    pub fn weight(&self, inst: &Instance, sub: &Subproblem) -> f64 {
        sub.indices
            .iter()
            .zip(&self.decisions)
            .map(|(&i, &x)| inst.weights()[i] as f64 * x)
            .sum()
    }

    /// Positions with a decision of one.
    pub fn chosen(&self) -> impl Iterator<Item = usize> + '_ {
        self.decisions
            .iter()
            .enumerate()
            .filter(|(_, &x)| x == 1.0)
            .map(|(pos, _)| pos)
    }
}

fn item(inst: &Instance, sub: &Subproblem, pos: usize) -> (u64, f64) {
    let i = sub.indices[pos];
    (inst.weights()[i], inst.profits()[i])
}

pub fn greedy(inst: &Instance, sub: &Subproblem) -> GreedyOutcome {
    let mut packed_weight = 0u64;
    let mut objective = 0.0;
    let mut pos = 0;
    while pos < sub.len() {
        let (w, p) = item(inst, sub, pos);
        if packed_weight + w > sub.capacity {
            break;
        }
        packed_weight += w;
        objective += p;
        pos += 1;
    }
    GreedyOutcome {
        split: pos + 1,
        packed_weight,
        slack: sub.capacity - packed_weight,
        objective,
    }
}

fn with_prefix(sub: &Subproblem, g: &GreedyOutcome, algorithm: Algorithm) -> Solution {
    let mut decisions = vec![0.0; sub.len()];
    decisions[..g.packed()].fill(1.0);
    Solution {
        algorithm,
        objective: g.objective,
        decisions,
        split: g.split,
        slack: g.slack,
    }
}

pub fn greedy_solution(inst: &Instance, sub: &Subproblem) -> Solution {
    with_prefix(sub, &greedy(inst, sub), Algorithm::Greedy)
}

/// First position attaining the largest profit among items that fit alone.
pub fn best_single_item(inst: &Instance, sub: &Subproblem) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for pos in 0..sub.len() {
        let (w, p) = item(inst, sub, pos);
        if w <= sub.capacity && best.is_none_or(|(_, bp)| p > bp) {
            best = Some((pos, p));
        }
    }
    best.map(|(pos, _)| pos)
}

pub fn extended_greedy(inst: &Instance, sub: &Subproblem) -> Solution {
    let g = greedy(inst, sub);
    let mut sol = with_prefix(sub, &g, Algorithm::ExtendedGreedy);
    if let Some(pos) = best_single_item(inst, sub) {
        let (_, p) = item(inst, sub, pos);
        if p > g.objective {
            sol.decisions.fill(0.0);
            sol.decisions[pos] = 1.0;
            sol.objective = p;
        }
    }
    sol
}

pub fn eligible_first(inst: &Instance, sub: &Subproblem) -> Solution {
    let g = greedy(inst, sub);
    let mut sol = with_prefix(sub, &g, Algorithm::EligibleFirst);
    // positions after the split item, i.e. from `split` on (0-based)
    if let Some(pos) = (g.split..sub.len()).find(|&pos| item(inst, sub, pos).0 <= g.slack) {
        sol.decisions[pos] = 1.0;
        sol.objective += item(inst, sub, pos).1;
    }
    sol
}

pub fn full_greedy(inst: &Instance, sub: &Subproblem) -> Solution {
    let g = greedy(inst, sub);
    let mut sol = with_prefix(sub, &g, Algorithm::FullGreedy);
    let mut residual = sub.capacity;
    let mut objective = 0.0;
    for pos in 0..sub.len() {
        let (w, p) = item(inst, sub, pos);
        if w <= residual {
            residual -= w;
            objective += p;
            sol.decisions[pos] = 1.0;
        } else {
            sol.decisions[pos] = 0.0;
        }
    }
    sol.objective = objective;
    sol
}

pub fn lp_relax(inst: &Instance, sub: &Subproblem) -> Solution {
    let g = greedy(inst, sub);
    let mut sol = with_prefix(sub, &g, Algorithm::LpRelaxation);
    if g.split <= sub.len() && g.slack > 0 {
        let (w, p) = item(inst, sub, g.split - 1);
        sol.decisions[g.split - 1] = g.slack as f64 / w as f64;
        sol.objective += g.slack as f64 * p / w as f64;
    }
    sol
}

pub fn dp_optimal(inst: &Instance, sub: &Subproblem) -> Result<Solution, SolveError> {
    dp_optimal_with_limit(inst, sub, DEFAULT_DP_CELL_LIMIT)
}

/// Exact optimum over the integer capacity axis.
///
/// Ties go to the selection that takes earlier items: the table records,
/// per item and capacity, whether taking the item still attains the optimum.
pub fn dp_optimal_with_limit(
    inst: &Instance,
    sub: &Subproblem,
    limit: u64,
) -> Result<Solution, SolveError> {
    let n = sub.len();
    let width = sub.capacity as usize + 1;
    let cells = (n as u64).saturating_mul(width as u64);
    if cells > limit {
        return Err(SolveError::CapacityOverflow { cells, limit });
    }
    let g = greedy(inst, sub);
    let mut best = vec![0.0f64; width];
    let mut take = vec![0u64; (n * width).div_ceil(64)];
    for pos in (0..n).rev() {
        let (w, p) = item(inst, sub, pos);
        let w = w as usize;
        if w >= width {
            continue;
        }
        for c in (w..width).rev() {
            let cand = p + best[c - w];
            if cand >= best[c] {
                best[c] = cand;
                let bit = pos * width + c;
                take[bit / 64] |= 1 << (bit % 64);
            }
        }
    }
    let mut decisions = vec![0.0; n];
    let mut c = sub.capacity as usize;
    for (pos, x) in decisions.iter_mut().enumerate() {
        let bit = pos * width + c;
        if take[bit / 64] >> (bit % 64) & 1 == 1 {
            *x = 1.0;
            c -= item(inst, sub, pos).0 as usize;
        }
    }
    Ok(Solution {
        algorithm: Algorithm::Dp,
        objective: best[width - 1],
        decisions,
        split: g.split,
        slack: g.slack,
    })
}

pub fn solve(
    inst: &Instance,
    sub: &Subproblem,
    algorithm: Algorithm,
) -> Result<Solution, SolveError> {
    Ok(match algorithm {
        Algorithm::Greedy => greedy_solution(inst, sub),
        Algorithm::ExtendedGreedy => extended_greedy(inst, sub),
        Algorithm::EligibleFirst => eligible_first(inst, sub),
        Algorithm::FullGreedy => full_greedy(inst, sub),
        Algorithm::LpRelaxation => lp_relax(inst, sub),
        Algorithm::Dp => dp_optimal(inst, sub)?,
    })
}
