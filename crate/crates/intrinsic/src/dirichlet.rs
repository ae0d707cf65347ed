//! The Dirichlet exponent constants `c(k, d)` and their cross-checks.
//!
//! For `1 <= k <= d`, the ambient dimension decomposes against the counts of
//! multi-indices per degree: `d = [k-1,1] + ... + [k-1,n] + m` with `n`
//! maximal and `0 <= m < [k-1,n+1]`. The weight `N = sum j*[k-1,j] + (n+1)m`
//! is the minimal total derivative order that can see `d+1` points of a
//! `k`-dimensional chart, and the exponent is `c = (d+1)/N`, kept as an
//! exact fraction throughout.

use crate::multiindex::binom;
use crate::rational::{to_bigint, Rational};
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;

/// The quadruple `(n, m, N, c)` for a dimension pair `(k, d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletConstants {
    pub k: u64,
    pub d: u64,
    /// Number of fully occupied derivative orders.
    pub n: u64,
    /// Points left over for order `n + 1`.
    pub m: BigUint,
    /// Minimal total derivative order `N`.
    pub weight: BigUint,
    /// The exponent `c = (d + 1) / N`, exact and reduced.
    pub exponent: Rational,
}

impl fmt::Display for DirichletConstants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k={} d={} n={} m={} N={} c={}",
            self.k, self.d, self.n, self.m, self.weight, self.exponent
        )
    }
}

fn check_pair(k: u64, d: u64) -> Result<()> {
    if k < 1 || d < k {
        Err(Error::InvalidPair { k: k as i64, d: d as i64 })
    } else {
        Ok(())
    }
}

/// Compute `(n, m, N, c)` for `1 <= k <= d` by the closed-form greedy fill.
pub fn dirichlet_constants(k: u64, d: u64) -> Result<DirichletConstants> {
    check_pair(k, d)?;
    let d_big = BigUint::from(d);
    let mut remaining = d_big;
    let mut n: u64 = 0;
    let mut weight = BigUint::zero();
    loop {
        let cap = binom(k - 1, n + 1);
        if cap > remaining {
            break;
        }
        n += 1;
        remaining -= &cap;
        weight += BigUint::from(n) * cap;
    }
    let m = remaining;
    weight += BigUint::from(n + 1) * &m;
    let exponent = Rational::new(BigInt::from(d + 1), to_bigint(&weight));
    Ok(DirichletConstants { k, d, n, m, weight, exponent })
}

/// Independent minimizer for the weight `N`: the exact minimum of
/// `sum_j j*n_j` over integer sequences with `0 <= n_j <= [k-1, j]` for
/// `j >= 1`, `n_0 <= 1`, and `sum_j n_j = d + 1`, by dynamic programming.
/// Guarded to `d <= 30`; capacities explode beyond that.
pub fn n_bruteforce(k: u64, d: u64) -> Result<BigUint> {
    check_pair(k, d)?;
    if d > 30 {
        return Err(Error::Unsupported(format!("bruteforce minimizer guarded to d <= 30, got {d}")));
    }
    let need = (d + 1) as usize;
    const INF: u64 = u64::MAX;
    // cost[r] = minimal weight to place r points using degrees examined so far
    let mut cost = vec![INF; need + 1];
    cost[0] = 0;
    for j in 0..=need as u64 {
        let cap = if j == 0 {
            1u64
        } else {
            binom(k - 1, j).to_u64().unwrap_or(u64::MAX)
        };
        let cap = cap.min(need as u64);
        let mut next = cost.clone();
        for placed in 0..=need {
            if cost[placed] == INF {
                continue;
            }
            for take in 1..=cap {
                let total = placed + take as usize;
                if total > need {
                    break;
                }
                let w = cost[placed] + j * take;
                if w < next[total] {
                    next[total] = w;
                }
            }
        }
        cost = next;
    }
    assert_ne!(cost[need], INF, "capacity shortfall");
    Ok(BigUint::from(cost[need]))
}

/// Both sides of the monomial-reembedding transfer identity
/// `(1/n) * (d+1)/N(k,d) == [d,n] / N(k, [d,n]-1)`, decided exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferCondition {
    pub holds: bool,
    pub lhs: Rational,
    pub rhs: Rational,
}

pub fn veronese_condition(k: u64, d: u64, n: u64) -> Result<TransferCondition> {
    check_pair(k, d)?;
    if n < 1 {
        return Err(Error::InvalidPair { k: n as i64, d: n as i64 });
    }
    let base = dirichlet_constants(k, d)?;
    let dn = binom(d, n);
    let target_dim = (&dn - BigUint::one())
        .to_u64()
        .ok_or_else(|| Error::Unsupported("reembedded dimension too large".into()))?;
    let target = dirichlet_constants(k, target_dim)?;
    let lhs = base.exponent.clone() / Rational::from_integer(BigInt::from(n));
    let rhs = Rational::new(to_bigint(&dn), to_bigint(&target.weight));
    Ok(TransferCondition { holds: lhs == rhs, lhs, rhs })
}

/// The exponent table `c(k, d)` for `1 <= k <= d <= d_max`.
pub fn c_table(d_max: u64) -> Vec<Vec<Rational>> {
    (1..=d_max)
        .map(|k| (k..=d_max).map(|d| dirichlet_constants(k, d).unwrap().exponent).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn pair_2_4() {
        let c = dirichlet_constants(2, 4).unwrap();
        assert_eq!((c.n, c.m.to_u64().unwrap()), (1, 2));
        assert_eq!(c.weight, BigUint::from(6u32));
        assert_eq!(c.exponent, rat(5, 6));
    }

    #[test]
    fn full_dimension_case() {
        // (d, d): n=1, m=0, N=d, c = 1 + 1/d
        let c = dirichlet_constants(3, 3).unwrap();
        assert_eq!((c.n, c.m.to_u64().unwrap()), (1, 0));
        assert_eq!(c.weight, BigUint::from(3u32));
        assert_eq!(c.exponent, rat(4, 3));
    }

    #[test]
    fn curve_case() {
        // (1, d): N = d(d+1)/2, c = 2/d
        let c = dirichlet_constants(1, 5).unwrap();
        assert_eq!(c.weight, BigUint::from(15u32));
        assert_eq!(c.exponent, rat(2, 5));
    }

    #[test]
    fn oracle_matches_closed_form_small() {
        for k in 1..=8u64 {
            for d in k..=8 {
                let closed = dirichlet_constants(k, d).unwrap().weight;
                let oracle = n_bruteforce(k, d).unwrap();
                assert_eq!(closed, oracle, "(k,d)=({k},{d})");
            }
        }
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(n_bruteforce(2, 6).unwrap(), BigUint::from(11u32));
        assert_eq!(n_bruteforce(3, 5).unwrap(), BigUint::from(7u32));
        for d in 1..=10u64 {
            assert_eq!(n_bruteforce(1, d).unwrap(), BigUint::from(d * (d + 1) / 2));
        }
    }

    #[test]
    fn transfer_condition_examples() {
        // k = d: holds for all 1 <= k, n <= 6
        for k in 1..=6 {
            for n in 1..=6 {
                let t = veronese_condition(k, k, n).unwrap();
                assert!(t.holds, "(k,n)=({k},{n}): {} vs {}", t.lhs, t.rhs);
            }
        }
        let t = veronese_condition(1, 1, 2).unwrap();
        assert_eq!(t.lhs, rat(1, 1));
        assert_eq!(t.rhs, rat(1, 1));
        // (1, 2, 2): (1/2)(3/3) = 1/2 vs [2,2]/N(1,5) = 6/15 = 2/5
        let t = veronese_condition(1, 2, 2).unwrap();
        assert_eq!(t.lhs, rat(1, 2));
        assert_eq!(t.rhs, rat(2, 5));
        assert!(!t.holds);
    }

    #[test]
    fn invalid_pairs_rejected() {
        assert!(dirichlet_constants(0, 3).is_err());
        assert!(dirichlet_constants(4, 3).is_err());
        assert!(n_bruteforce(2, 40).is_err());
    }
}
