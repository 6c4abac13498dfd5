use alloc::vec::Vec;

use thiserror::Error;

/// Relative slack allowed when checking that efficiencies are non-increasing.
/// Profits built as `g * w` can lose the last bit when divided back.
const EFFICIENCY_ROUNDOFF: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceError {
    #[error("capacity must be positive")]
    ZeroCapacity,
    #[error("instance has no items")]
    Empty,
    #[error("{weights} weights but {profits} profits")]
    LengthMismatch { weights: usize, profits: usize },
    #[error("item {index} has non-positive weight")]
    NonPositiveWeight { index: usize },
    #[error("item {index} has invalid profit {profit}")]
    InvalidProfit { index: usize, profit: f64 },
    #[error("item {index} weighs {weight}, more than the capacity {capacity}")]
    OversizedItem {
        index: usize,
        weight: u64,
        capacity: u64,
    },
    #[error("total weight {total} fits in capacity {capacity}")]
    TrivialInstance { total: u64, capacity: u64 },
    #[error("efficiency increases at item {index}")]
    UnsortedEfficiencies { index: usize },
}

/// A validated 0-1 knapsack instance, items sorted by non-increasing
/// efficiency. Item indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    capacity: u64,
    weights: Vec<u64>,
    profits: Vec<f64>,
}

impl Instance {
    pub fn new(capacity: u64, weights: Vec<u64>, profits: Vec<f64>) -> Result<Self, InstanceError> {
        if capacity == 0 {
            return Err(InstanceError::ZeroCapacity);
        }
        if weights.len() != profits.len() {
            return Err(InstanceError::LengthMismatch {
                weights: weights.len(),
                profits: profits.len(),
            });
        }
        if weights.is_empty() {
            return Err(InstanceError::Empty);
        }
        let mut total: u64 = 0;
        for (index, (&weight, &profit)) in weights.iter().zip(&profits).enumerate() {
            if weight == 0 {
                return Err(InstanceError::NonPositiveWeight { index });
            }
            if !profit.is_finite() || profit < 0.0 {
                return Err(InstanceError::InvalidProfit { index, profit });
            }
            if weight > capacity {
                return Err(InstanceError::OversizedItem {
                    index,
                    weight,
                    capacity,
                });
            }
            total = total.saturating_add(weight);
        }
        if total <= capacity {
            return Err(InstanceError::TrivialInstance { total, capacity });
        }
        for index in 1..weights.len() {
            let prev = profits[index - 1] / weights[index - 1] as f64;
            let cur = profits[index] / weights[index] as f64;
            if cur > prev * (1.0 + EFFICIENCY_ROUNDOFF) {
                return Err(InstanceError::UnsortedEfficiencies { index });
            }
        }
        Ok(Instance {
            capacity,
            weights,
            profits,
        })
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn profits(&self) -> &[f64] {
        &self.profits
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn efficiency(&self, index: usize) -> f64 {
        self.profits[index] / self.weights[index] as f64
    }

    /// The whole instance seen as a subproblem.
    pub fn root(&self) -> Subproblem {
        Subproblem {
            indices: (0..self.len()).collect(),
            capacity: self.capacity,
        }
    }
}

/// Ordered subset of an instance's items with its own capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subproblem {
    pub indices: Vec<usize>,
    pub capacity: u64,
}

impl Subproblem {
    pub fn new(indices: Vec<usize>, capacity: u64) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        Subproblem { indices, capacity }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_each_hypothesis_violation() {
        assert_eq!(
            Instance::new(5, vec![3], vec![1.0]),
            Err(InstanceError::TrivialInstance {
                total: 3,
                capacity: 5
            })
        );
        assert!(matches!(
            Instance::new(3, vec![4], vec![1.0]),
            Err(InstanceError::OversizedItem { index: 0, .. })
        ));
        assert!(matches!(
            Instance::new(3, vec![2, 0], vec![1.0, 1.0]),
            Err(InstanceError::NonPositiveWeight { index: 1 })
        ));
        assert!(matches!(
            Instance::new(3, vec![2, 2], vec![1.0, 4.0]),
            Err(InstanceError::UnsortedEfficiencies { index: 1 })
        ));
    }
}
