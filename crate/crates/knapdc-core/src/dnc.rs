//! Odd/even divide-and-conquer pairs and trees.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::instance::{Instance, Subproblem};
use crate::solve::{self, Algorithm, Solution, SolveError};

pub const DEFAULT_MIN_SIZE: usize = 2;

/// Relative tolerance for comparing greedy sums taken in different orders.
const SUM_ORDER_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn letter(self) -> char {
        match self {
            Side::Left => 'l',
            Side::Right => 'r',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DncError {
    #[error("min size must be positive")]
    ZeroMinSize,
    #[error("node at depth {depth} has {size} items, branching needs at least {needed}")]
    MinSizeViolated {
        depth: usize,
        size: usize,
        needed: usize,
    },
    #[error("control solution weighs {weight}, root capacity is {capacity}")]
    InfeasibleControl { weight: f64, capacity: u64 },
    #[error("decision vector has {got} entries, instance has {expected} items")]
    DecisionLength { got: usize, expected: usize },
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub subproblem: Subproblem,
    /// Turns taken from the root; empty for the root itself.
    pub marker: Vec<Side>,
    pub children: Option<Box<[Node; 2]>>,
}

impl Node {
    fn leaf(subproblem: Subproblem, marker: Vec<Side>) -> Self {
        Node {
            subproblem,
            marker,
            children: None,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }

    fn child_marker(&self, side: Side) -> Vec<Side> {
        let mut m = self.marker.clone();
        m.push(side);
        m
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    pub root: Node,
    pub min_size: usize,
}

impl Tree {
    /// Nodes in depth-first order, left before right.
    pub fn nodes(&self) -> Vec<&Node> {
        let mut out = Vec::new();
        let mut stack = vec![&self.root];
        while let Some(node) = stack.pop() {
            out.push(node);
            if let Some(kids) = &node.children {
                stack.push(&kids[1]);
                stack.push(&kids[0]);
            }
        }
        out
    }

    pub fn leaves(&self) -> Vec<&Node> {
        self.nodes().into_iter().filter(|n| n.is_leaf()).collect()
    }

    pub fn internal(&self) -> Vec<&Node> {
        self.nodes().into_iter().filter(|n| !n.is_leaf()).collect()
    }

    pub fn height(&self) -> usize {
        self.nodes()
            .iter()
            .map(|n| n.marker.len())
            .max()
            .unwrap_or(0)
    }

    pub fn leaf_markers(&self) -> Vec<Vec<Side>> {
        self.leaves()
            .into_iter()
            .map(|n| n.marker.clone())
            .collect()
    }
}

/// Greedy meets extended greedy: no single item beats the greedy prefix.
pub fn branching_gate(inst: &Instance, sub: &Subproblem) -> bool {
    let g = solve::greedy(inst, sub);
    match solve::best_single_item(inst, sub) {
        Some(pos) => g.objective >= inst.profits()[sub.indices[pos]],
        None => true,
    }
}

/// Odd relative positions go left, even go right; each side gets its share
/// of the greedy-packed weight plus half the slack (the extra unit left).
pub fn split_pair(inst: &Instance, sub: &Subproblem) -> (Subproblem, Subproblem) {
    let g = solve::greedy(inst, sub);
    let mut left = Vec::with_capacity(sub.len().div_ceil(2));
    let mut right = Vec::with_capacity(sub.len() / 2);
    let mut left_packed = 0u64;
    let mut right_packed = 0u64;
    for (pos, &i) in sub.indices.iter().enumerate() {
        let packed = pos < g.packed();
        if pos % 2 == 0 {
            left.push(i);
            if packed {
                left_packed += inst.weights()[i];
            }
        } else {
            right.push(i);
            if packed {
                right_packed += inst.weights()[i];
            }
        }
    }
    let left_cap = left_packed + g.slack.div_ceil(2);
    let right_cap = right_packed + g.slack / 2;
    debug_assert_eq!(left_cap + right_cap, sub.capacity);
    (
        Subproblem::new(left, left_cap),
        Subproblem::new(right, right_cap),
    )
}

pub fn branch(
    inst: &Instance,
    sub: &Subproblem,
    min_size: usize,
) -> Option<(Subproblem, Subproblem)> {
    if sub.len() >= 2 * min_size && branching_gate(inst, sub) {
        Some(split_pair(inst, sub))
    } else {
        None
    }
}

pub fn build_tree(inst: &Instance, min_size: usize) -> Result<Tree, DncError> {
    if min_size == 0 {
        return Err(DncError::ZeroMinSize);
    }
    fn grow(inst: &Instance, node: &mut Node, min_size: usize) {
        if let Some((l, r)) = branch(inst, &node.subproblem, min_size) {
            let mut kids = Box::new([
                Node::leaf(l, node.child_marker(Side::Left)),
                Node::leaf(r, node.child_marker(Side::Right)),
            ]);
            for kid in kids.iter_mut() {
                grow(inst, kid, min_size);
            }
            node.children = Some(kids);
        }
    }
    let mut root = Node::leaf(inst.root(), Vec::new());
    grow(inst, &mut root, min_size);
    Ok(Tree { root, min_size })
}

/// Tree grown under the greedy gate, cut off at `max_height`.
pub fn build_gated_tree(
    inst: &Instance,
    max_height: usize,
    min_size: usize,
) -> Result<Tree, DncError> {
    if min_size == 0 {
        return Err(DncError::ZeroMinSize);
    }
    fn grow(inst: &Instance, node: &mut Node, levels: usize, min_size: usize) {
        if levels == 0 {
            return;
        }
        if let Some((l, r)) = branch(inst, &node.subproblem, min_size) {
            let mut kids = Box::new([
                Node::leaf(l, node.child_marker(Side::Left)),
                Node::leaf(r, node.child_marker(Side::Right)),
            ]);
            for kid in kids.iter_mut() {
                grow(inst, kid, levels - 1, min_size);
            }
            node.children = Some(kids);
        }
    }
    let mut root = Node::leaf(inst.root(), Vec::new());
    grow(inst, &mut root, max_height, min_size);
    Ok(Tree { root, min_size })
}

/// Complete tree of the given height, ignoring the greedy gate.
pub fn build_full_tree(inst: &Instance, height: usize, min_size: usize) -> Result<Tree, DncError> {
    if min_size == 0 {
        return Err(DncError::ZeroMinSize);
    }
    fn grow(
        inst: &Instance,
        node: &mut Node,
        levels: usize,
        min_size: usize,
    ) -> Result<(), DncError> {
        if levels == 0 {
            return Ok(());
        }
        let size = node.subproblem.len();
        if size < 2 * min_size {
            return Err(DncError::MinSizeViolated {
                depth: node.marker.len(),
                size,
                needed: 2 * min_size,
            });
        }
        let (l, r) = split_pair(inst, &node.subproblem);
        let mut kids = Box::new([
            Node::leaf(l, node.child_marker(Side::Left)),
            Node::leaf(r, node.child_marker(Side::Right)),
        ]);
        for kid in kids.iter_mut() {
            grow(inst, kid, levels - 1, min_size)?;
        }
        node.children = Some(kids);
        Ok(())
    }
    let mut root = Node::leaf(inst.root(), Vec::new());
    grow(inst, &mut root, height, min_size)?;
    Ok(Tree { root, min_size })
}

/// Internal nodes where the greedy gate would have refused to branch.
pub fn gate_refusals(inst: &Instance, tree: &Tree) -> usize {
    tree.internal()
        .into_iter()
        .filter(|n| !branching_gate(inst, &n.subproblem))
        .count()
}

/// Children partition the parent's items and capacity at every internal
/// node, and the leaves partition the whole instance.
pub fn structure_holds(inst: &Instance, tree: &Tree) -> bool {
    for node in tree.internal() {
        let kids = node.children.as_ref().unwrap();
        if kids[0].subproblem.capacity + kids[1].subproblem.capacity != node.subproblem.capacity {
            return false;
        }
        let mut merged: Vec<usize> = kids
            .iter()
            .flat_map(|k| k.subproblem.indices.iter().copied())
            .collect();
        merged.sort_unstable();
        if merged != node.subproblem.indices {
            return false;
        }
    }
    let mut seen = vec![false; inst.len()];
    let mut cap = 0;
    for leaf in tree.leaves() {
        cap += leaf.subproblem.capacity;
        for &i in &leaf.subproblem.indices {
            if seen[i] {
                return false;
            }
            seen[i] = true;
        }
    }
    cap == inst.capacity() && seen.iter().all(|&s| s)
}

/// Greedy on a pair never loses against greedy on the parent.
pub fn pair_greedy_holds(inst: &Instance, tree: &Tree) -> bool {
    tree.internal().into_iter().all(|node| {
        let kids = node.children.as_ref().unwrap();
        let parent = solve::greedy(inst, &node.subproblem).objective;
        let pair = solve::greedy(inst, &kids[0].subproblem).objective
            + solve::greedy(inst, &kids[1].subproblem).objective;
        parent <= pair + SUM_ORDER_TOLERANCE * parent.abs()
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeSolution {
    pub objective: f64,
    /// Indexed by instance item.
    pub decisions: Vec<f64>,
    /// Leaf solutions in left-to-right order.
    pub leaves: Vec<Solution>,
}

pub fn tree_solve(
    inst: &Instance,
    tree: &Tree,
    leaf_solver: Algorithm,
) -> Result<TreeSolution, DncError> {
    let mut decisions = vec![0.0; inst.len()];
    let mut objective = 0.0;
    let mut leaves = Vec::new();
    for leaf in tree.leaves() {
        let sol = solve::solve(inst, &leaf.subproblem, leaf_solver)?;
        for (&i, &x) in leaf.subproblem.indices.iter().zip(&sol.decisions) {
            decisions[i] = x;
        }
        objective += sol.objective;
        leaves.push(sol);
    }
    Ok(TreeSolution {
        objective,
        decisions,
        leaves,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeafLoad {
    pub marker: Vec<Side>,
    pub load: f64,
    pub capacity: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControlReport {
    /// Every leaf can hold its share of the control solution.
    pub holds: bool,
    pub leaves: Vec<LeafLoad>,
}

pub fn verify_control(
    inst: &Instance,
    tree: &Tree,
    control: &[f64],
) -> Result<ControlReport, DncError> {
    if control.len() != inst.len() {
        return Err(DncError::DecisionLength {
            got: control.len(),
            expected: inst.len(),
        });
    }
    let weight: f64 = inst
        .weights()
        .iter()
        .zip(control)
        .map(|(&w, &x)| w as f64 * x)
        .sum();
    if weight > inst.capacity() as f64 {
        return Err(DncError::InfeasibleControl {
            weight,
            capacity: inst.capacity(),
        });
    }
    let leaves: Vec<LeafLoad> = tree
        .leaves()
        .into_iter()
        .map(|leaf| LeafLoad {
            marker: leaf.marker.clone(),
            load: leaf
                .subproblem
                .indices
                .iter()
                .map(|&i| inst.weights()[i] as f64 * control[i])
                .sum(),
            capacity: leaf.subproblem.capacity,
        })
        .collect();
    let holds = leaves.iter().all(|l| l.load <= l.capacity as f64);
    Ok(ControlReport { holds, leaves })
}

/// Tree optimum over instance optimum, both by DP.
pub fn worst_case_ratio(inst: &Instance, tree: &Tree) -> Result<f64, DncError> {
    let whole = solve::dp_optimal(inst, &inst.root())?.objective;
    let split = tree_solve(inst, tree, Algorithm::Dp)?.objective;
    Ok(split / whole)
}
