//! Knapsack divide-and-conquer toolkit, allocation-only core.
//!
//! Everything here is a pure function of its inputs: instance validation,
//! the greedy family of bounding algorithms, exact DP, odd/even
//! divide-and-conquer trees, integer compositions, the uniform random
//! model and the closed-form expectations that describe it.

#![no_std]

extern crate alloc;

pub mod analytics;
pub mod combinatorics;
pub mod dnc;
pub mod instance;
pub mod randmodel;
pub mod solve;

pub use instance::{Instance, InstanceError, Subproblem};
pub use solve::{Algorithm, GreedyOutcome, Solution, SolveError};
