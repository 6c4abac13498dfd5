//! Uniform random instances: `delta + 1` items, integer weights uniform on
//! `1..=delta`, efficiencies built as suffix sums of uniform increments.
//!
//! Trial `t` of a seed draws from ChaCha8 stream `t` of that seed, so any
//! trial can be regenerated on its own. Stream 0 backs [`sample`].

use alloc::vec::Vec;

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::instance::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModelParams {
    pub delta: u64,
    pub seed: u64,
}

impl ModelParams {
    pub fn new(delta: u64, seed: u64) -> Self {
        assert!(delta >= 1, "capacity must be positive");
        ModelParams { delta, seed }
    }

    /// Number of items, always one more than the capacity.
    pub fn items(&self) -> usize {
        self.delta as usize + 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomInstance {
    pub instance: Instance,
    pub increments: Vec<f64>,
}

impl RandomInstance {
    /// Efficiencies rebuilt from the increments.
    pub fn efficiencies(&self) -> Vec<f64> {
        suffix_sums(&self.increments)
    }
}

fn suffix_sums(increments: &[f64]) -> Vec<f64> {
    let mut out = alloc::vec![0.0; increments.len()];
    let mut acc = 0.0;
    for (slot, &t) in out.iter_mut().zip(increments).rev() {
        acc += t;
        *slot = acc;
    }
    out
}

pub fn trial_rng(params: ModelParams, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(trial);
    rng
}

/// Weights first, then increments, both in item order.
pub fn sample_with(params: ModelParams, rng: &mut ChaCha8Rng) -> RandomInstance {
    let n = params.items();
    let weight_law = Uniform::new_inclusive(1, params.delta);
    let unit = Uniform::new(0.0, 1.0);
    let weights: Vec<u64> = (0..n).map(|_| weight_law.sample(rng)).collect();
    let increments: Vec<f64> = (0..n).map(|_| unit.sample(rng)).collect();
    let profits = suffix_sums(&increments)
        .into_iter()
        .zip(&weights)
        .map(|(g, &w)| g * w as f64)
        .collect();
    let instance = Instance::new(params.delta, weights, profits)
        .expect("model instances always satisfy the instance hypotheses");
    RandomInstance {
        instance,
        increments,
    }
}

pub fn sample(params: ModelParams) -> RandomInstance {
    sample_trial(params, 0)
}

pub fn sample_trial(params: ModelParams, trial: u64) -> RandomInstance {
    sample_with(params, &mut trial_rng(params, trial))
}

/// Trials `1..=count`.
pub fn sample_stream(params: ModelParams, count: u64) -> impl Iterator<Item = RandomInstance> {
    (1..=count).map(move |t| sample_trial(params, t))
}
