//! Binomials, integer compositions and odd/even part sums.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Largest number of compositions an enumeration may produce.
pub const COMPOSITION_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinatoricsError {
    #[error("need 1 <= m <= n, got n={n} m={m}")]
    BadShape { n: u64, m: u64 },
    #[error("{count} compositions exceed the limit {limit}")]
    SizeGuard { count: BigUint, limit: u64 },
}

/// Exact binomial coefficient; zero when `m > n`.
pub fn binom(n: u64, m: u64) -> BigUint {
    if m > n {
        return BigUint::zero();
    }
    let m = m.min(n - m);
    let mut acc = BigUint::one();
    for j in 0..m {
        acc *= n - j;
        acc /= j + 1;
    }
    acc
}

/// Binomial that fits in u128, for the hot loops that stay small.
pub fn binom_u128(n: u64, m: u64) -> Option<u128> {
    binom(n, m).to_u128()
}

/// Natural log of the binomial coefficient, `m <= n`.
pub fn log_binom(n: u64, m: u64) -> f64 {
    assert!(m <= n, "log_binom({n}, {m})");
    let m = m.min(n - m);
    if m <= 30 {
        let mut acc = 0.0;
        for j in 1..=m {
            acc += libm::log((n - m + j) as f64 / j as f64);
        }
        return acc;
    }
    libm::lgamma(n as f64 + 1.0) - libm::lgamma(m as f64 + 1.0) - libm::lgamma((n - m) as f64 + 1.0)
}

/// Compositions of `n` into `m` positive parts, lexicographic in the cut
/// points (so `(1, .., 1, n-m+1)` comes first).
#[derive(Debug, Clone)]
pub struct Compositions {
    n: u64,
    cuts: Vec<u64>,
    done: bool,
}

impl Iterator for Compositions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let mut parts = Vec::with_capacity(self.cuts.len() + 1);
        let mut prev = 0;
        for &c in &self.cuts {
            parts.push(c - prev);
            prev = c;
        }
        parts.push(self.n - prev);

        // advance the cut-point combination
        let r = self.cuts.len();
        let top = self.n - 1;
        let mut i = r;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.cuts[i] < top - (r - 1 - i) as u64 {
                self.cuts[i] += 1;
                for j in i + 1..r {
                    self.cuts[j] = self.cuts[j - 1] + 1;
                }
                break;
            }
        }
        Some(parts)
    }
}

pub fn enumerate_compositions(n: u64, m: u64) -> Result<Compositions, CombinatoricsError> {
    if m == 0 || m > n {
        return Err(CombinatoricsError::BadShape { n, m });
    }
    let count = binom(n - 1, m - 1);
    if count > BigUint::from(COMPOSITION_LIMIT) {
        return Err(CombinatoricsError::SizeGuard {
            count,
            limit: COMPOSITION_LIMIT,
        });
    }
    Ok(Compositions {
        n,
        cuts: (1..m).collect(),
        done: false,
    })
}

/// Totals of parts at odd (1st, 3rd, ..) and even positions over every
/// composition of `n` into `m` parts.
pub fn odd_even_sums(n: u64, m: u64) -> Result<(u64, u64), CombinatoricsError> {
    let mut odd = 0;
    let mut even = 0;
    for parts in enumerate_compositions(n, m)? {
        for (pos, part) in parts.iter().enumerate() {
            if pos % 2 == 0 {
                odd += part;
            } else {
                even += part;
            }
        }
    }
    Ok((odd, even))
}

/// Closed form of odd-position total minus even-position total.
///
/// Zero for even `m`. For odd `m >= 3`, the compositions whose first part
/// is `i` and whose remaining parts pair up contribute `i` each, and there
/// are `C(n-i-1, m-2)` of them.
pub fn odd_even_difference(n: u64, m: u64) -> BigUint {
    if m == 0 || m > n || m.is_multiple_of(2) {
        return BigUint::zero();
    }
    if m == 1 {
        return BigUint::from(n);
    }
    (1..=n - m + 1).map(|i| binom(n - i - 1, m - 2) * i).sum()
}

/// The constant printed for odd `m = 2l+1`: `(n+1)/(2(l+1)) * C(n, 2l+1)`.
pub fn printed_odd_even_difference(n: u64, m: u64) -> BigRational {
    let l = (m - 1) / 2;
    let num = num_bigint::BigInt::from(binom(n, 2 * l + 1) * (n + 1));
    BigRational::new(num, num_bigint::BigInt::from(2 * (l + 1)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyRow {
    pub n: u64,
    pub m: u64,
    pub count: u64,
    pub printed_count: BigUint,
    pub difference: u64,
    pub shipped: BigUint,
    pub printed: BigRational,
}

impl DiscrepancyRow {
    pub fn shipped_matches(&self) -> bool {
        self.shipped == BigUint::from(self.difference)
    }

    pub fn printed_matches(&self) -> bool {
        self.printed == BigRational::from_integer(self.difference.into())
            && self.printed_count == BigUint::from(self.count)
    }
}

/// Brute force against both closed forms for every odd `m <= n <= max_n`.
pub fn odd_difference_report(max_n: u64) -> Result<Vec<DiscrepancyRow>, CombinatoricsError> {
    let mut rows = Vec::new();
    for n in 1..=max_n {
        for m in (1..=n).step_by(2) {
            let (odd, even) = odd_even_sums(n, m)?;
            let l = (m - 1) / 2;
            rows.push(DiscrepancyRow {
                n,
                m,
                count: binom(n - 1, m - 1).to_u64().unwrap_or(u64::MAX),
                printed_count: binom(n, 2 * l + 1),
                difference: odd - even,
                shipped: odd_even_difference(n, m),
                printed: printed_odd_even_difference(n, m),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn small_compositions_in_order() {
        let all: Vec<_> = enumerate_compositions(4, 3).unwrap().collect();
        assert_eq!(all, vec![vec![1, 1, 2], vec![1, 2, 1], vec![2, 1, 1]]);
        assert_eq!(
            enumerate_compositions(5, 1).unwrap().collect::<Vec<_>>(),
            vec![vec![5]]
        );
        assert_eq!(
            enumerate_compositions(3, 3).unwrap().collect::<Vec<_>>(),
            vec![vec![1, 1, 1]]
        );
    }

    #[test]
    fn four_into_three() {
        assert_eq!(odd_even_sums(4, 3).unwrap(), (8, 4));
        assert_eq!(odd_even_difference(4, 3), BigUint::from(4u32));
    }

    #[test]
    fn guard_trips() {
        assert!(matches!(
            enumerate_compositions(40, 20),
            Err(CombinatoricsError::SizeGuard { .. })
        ));
    }
}
