//! Exact rational laws for small capacities, and the brute-force
//! enumeration over every weight tuple that checks them.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::AnalyticsError;
use crate::combinatorics::binom;

/// Largest number of weight tuples [`enumerate_model`] will walk.
pub const ENUMERATION_LIMIT: u64 = 50_000_000;

fn int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn ratio(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn big(n: num_bigint::BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn split_probability(delta: u64, s: u64) -> BigRational {
    if s < 2 || s > delta + 1 {
        return BigRational::zero();
    }
    int(s - 1) * big(binom(delta + 1, s)) / int(delta).pow(s as i32)
}

pub fn slack_probability(delta: u64, k: u64) -> BigRational {
    if k >= delta {
        return BigRational::zero();
    }
    ratio(delta - k, delta * delta) * ratio(delta + 1, delta).pow((delta - k - 1) as i32)
}

pub fn joint_slack_split(delta: u64, k: u64, s: u64) -> BigRational {
    if s < 2 || s > delta + 1 || k + s > delta + 1 {
        return BigRational::zero();
    }
    let free = delta - k;
    int(free) * big(binom(free - 1, s - 2)) / int(delta).pow(s as i32)
}

pub fn weight_mean_given_split(delta: u64, s: u64) -> BigRational {
    ratio(delta * s + s - 1, s * s - 1)
}

pub fn slack_mean_given_split(delta: u64, s: u64) -> BigRational {
    ratio(delta + 1 - s, s + 1)
}

/// Mean greedy profit given the split, with each efficiency at its mean.
pub fn greedy_mean_given_split(delta: u64, s: u64) -> BigRational {
    ratio(2 * delta + 4 - s, 4) * ratio(delta * s + s - 1, s + 1)
}

/// Exact mean left capacity, odd `delta`.
pub fn cap_left_mean(delta: u64) -> Result<BigRational, AnalyticsError> {
    if delta.is_multiple_of(2) {
        return Err(AnalyticsError::OddItemCount { delta });
    }
    let d = int(delta);
    let items = delta + 1;
    let up = ratio(delta + 1, delta);
    let down = ratio(delta - 1, delta);
    let mut odd_half = BigRational::zero();
    for m in (2..=delta).step_by(2) {
        odd_half += int(m) * up.pow(m as i32 - 1);
    }
    odd_half /= int(2 * delta * delta);
    Ok(
        &d / int(2) + odd_half + ratio(items, 4) * (up.pow(items as i32) + down.pow(items as i32))
            - &d / int(4) * (up.pow(items as i32 + 1) - down.pow(items as i32 + 1))
            + ratio(1, 2),
    )
}

/// Sums over all `delta^(delta+1)` equally likely weight tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelEnumeration {
    pub delta: u64,
    pub total: u64,
    /// Indexed by split position.
    pub split_counts: Vec<u64>,
    /// Indexed by slack.
    pub slack_counts: Vec<u64>,
    /// `joint_counts[s][k]`.
    pub joint_counts: Vec<Vec<u64>>,
    /// `weight_sums[s][j]`: total of the weight at 0-based position `j < s-1`
    /// over tuples with split `s`.
    pub weight_sums: Vec<Vec<u64>>,
    /// Total slack over tuples with split `s`.
    pub slack_sums: Vec<u64>,
    /// Twice the greedy profit with efficiencies at their means, summed.
    pub greedy_twice: u64,
    /// Twice the fractional LP gain likewise.
    pub lp_gain_twice: u64,
    /// Left capacity of the odd/even split, summed.
    pub cap_left_sum: u64,
}

pub fn enumerate_model(delta: u64) -> Result<ModelEnumeration, AnalyticsError> {
    let items = delta + 1;
    let total = (delta as u128)
        .checked_pow(items as u32)
        .unwrap_or(u128::MAX);
    if delta == 0 || total > ENUMERATION_LIMIT as u128 {
        return Err(AnalyticsError::TooLarge { delta, items });
    }
    let n = items as usize;
    let mut e = ModelEnumeration {
        delta,
        total: total as u64,
        split_counts: vec![0; n + 2],
        slack_counts: vec![0; delta as usize + 1],
        joint_counts: vec![vec![0; delta as usize + 1]; n + 2],
        weight_sums: vec![vec![0; n]; n + 2],
        slack_sums: vec![0; n + 2],
        greedy_twice: 0,
        lp_gain_twice: 0,
        cap_left_sum: 0,
    };
    let mut w = vec![1u64; n];
    loop {
        let mut packed = 0;
        let mut pos = 0;
        while pos < n && packed + w[pos] <= delta {
            packed += w[pos];
            pos += 1;
        }
        let s = pos + 1;
        let k = delta - packed;
        e.split_counts[s] += 1;
        e.slack_counts[k as usize] += 1;
        e.joint_counts[s][k as usize] += 1;
        e.slack_sums[s] += k;
        let mut left = k.div_ceil(2);
        for (j, &wj) in w[..pos].iter().enumerate() {
            e.weight_sums[s][j] += wj;
            e.greedy_twice += wj * (items - j as u64);
            if j % 2 == 0 {
                left += wj;
            }
        }
        e.lp_gain_twice += k * (items + 1 - s as u64);
        e.cap_left_sum += left;

        let mut i = 0;
        while i < n && w[i] == delta {
            w[i] = 1;
            i += 1;
        }
        if i == n {
            break;
        }
        w[i] += 1;
    }
    Ok(e)
}

impl ModelEnumeration {
    fn of_total(&self, count: u64) -> BigRational {
        ratio(count, self.total)
    }

    pub fn split_probability(&self, s: u64) -> BigRational {
        self.of_total(self.split_counts.get(s as usize).copied().unwrap_or(0))
    }

    pub fn slack_probability(&self, k: u64) -> BigRational {
        self.of_total(self.slack_counts.get(k as usize).copied().unwrap_or(0))
    }

    pub fn joint(&self, k: u64, s: u64) -> BigRational {
        let c = self
            .joint_counts
            .get(s as usize)
            .and_then(|row| row.get(k as usize))
            .copied()
            .unwrap_or(0);
        self.of_total(c)
    }

    /// `None` when the split never occurs.
    pub fn weight_mean_given_split(&self, s: u64, j: usize) -> Option<BigRational> {
        let count = self.split_counts[s as usize];
        (count > 0).then(|| ratio(self.weight_sums[s as usize][j], count))
    }

    pub fn slack_mean_given_split(&self, s: u64) -> Option<BigRational> {
        let count = self.split_counts[s as usize];
        (count > 0).then(|| ratio(self.slack_sums[s as usize], count))
    }

    pub fn greedy_mean(&self) -> BigRational {
        ratio(self.greedy_twice, 2 * self.total)
    }

    pub fn lp_mean(&self) -> BigRational {
        ratio(self.greedy_twice + self.lp_gain_twice, 2 * self.total)
    }

    pub fn cap_left_mean(&self) -> BigRational {
        ratio(self.cap_left_sum, self.total)
    }
}

/// One disagreement between enumeration and a closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub quantity: String,
    pub enumerated: BigRational,
    pub closed_form: BigRational,
}

/// Compare every exact law against enumeration at this capacity. The greedy,
/// LP and capacity means go through floating point and must agree to 1e-12.
pub fn cross_check(delta: u64) -> Result<Vec<Mismatch>, AnalyticsError> {
    let e = enumerate_model(delta)?;
    let mut out = Vec::new();
    let mut check = |quantity: String, enumerated: BigRational, closed_form: BigRational| {
        if enumerated != closed_form {
            out.push(Mismatch {
                quantity,
                enumerated,
                closed_form,
            });
        }
    };
    let items = delta + 1;
    for s in 0..=items + 1 {
        check(
            format!("P(S={s})"),
            e.split_probability(s),
            split_probability(delta, s),
        );
    }
    for k in 0..=delta {
        check(
            format!("P(K={k})"),
            e.slack_probability(k),
            slack_probability(delta, k),
        );
    }
    for s in 2..=items {
        for k in 0..=delta {
            check(
                format!("P(K={k},S={s})"),
                e.joint(k, s),
                joint_slack_split(delta, k, s),
            );
        }
        if let Some(mean) = e.slack_mean_given_split(s) {
            check(
                format!("E(K|S={s})"),
                mean,
                slack_mean_given_split(delta, s),
            );
        }
        for j in 0..(s - 1) as usize {
            if let Some(mean) = e.weight_mean_given_split(s, j) {
                check(
                    format!("E(W{}|S={s})", j + 1),
                    mean,
                    weight_mean_given_split(delta, s),
                );
            }
        }
    }
    let mut close = |quantity: &str, enumerated: BigRational, value: f64| {
        let x = enumerated.to_f64().unwrap_or(f64::NAN);
        if (x - value).abs() > 1e-12 * x.abs().max(1.0) {
            out.push(Mismatch {
                quantity: quantity.into(),
                closed_form: BigRational::from_float(value).unwrap_or_default(),
                enumerated,
            });
        }
    };
    close("E Zgr", e.greedy_mean(), super::whole::greedy_mean(delta));
    close("E Zlp", e.lp_mean(), super::whole::lp_mean(delta));
    if delta % 2 == 1 {
        let exact = cap_left_mean(delta)?;
        close(
            "E Clt",
            e.cap_left_mean(),
            exact.to_f64().unwrap_or(f64::NAN),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_capacity_by_hand() {
        let e = enumerate_model(2).unwrap();
        assert_eq!(e.total, 8);
        assert_eq!(e.split_probability(2), ratio(3, 4));
        assert_eq!(e.split_probability(3), ratio(1, 4));
        assert_eq!(e.joint(0, 2), ratio(1, 2));
        assert_eq!(e.weight_mean_given_split(2, 0), Some(ratio(5, 3)));
    }
}
