//! Enumeration of reduced fractions with bounded denominator in an interval.
//!
//! `fractions_in_interval` walks the Farey sequence `F_Q` restricted to a
//! closed interval. It anchors at the minimal-denominator fraction of the
//! interval (Stern-Brocot descent) and steps to neighbors with the classic
//! `p'q - pq' = 1` identity, so the cost is proportional to the number of
//! fractions emitted rather than to `Q`. That matters: deep game states ask
//! for denominators up to `2^70` inside intervals of width `2^-70`.

use crate::rational::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// The unique fraction of minimal denominator in the closed interval
/// `[lo, hi]` (ties among integers broken toward zero).
pub fn simplest_in_interval(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo <= hi, "empty interval");
    let ceil_lo = lo.ceil().to_integer();
    let floor_hi = hi.floor().to_integer();
    if ceil_lo <= floor_hi {
        // at least one integer: the one closest to zero is canonical
        let zero = BigInt::zero();
        let pick = if ceil_lo <= zero && zero <= floor_hi {
            zero
        } else if floor_hi < zero {
            floor_hi
        } else {
            ceil_lo
        };
        return Rational::from_integer(pick);
    }
    // no integer inside: identical integer parts, recurse on reciprocals
    let n = lo.floor();
    let fl = lo - &n;
    let fh = hi - &n;
    debug_assert!(fl.is_positive() && fh.is_positive());
    let inner = simplest_in_interval(&(Rational::one() / fh), &(Rational::one() / fl));
    n + Rational::one() / inner
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    // m >= 1, gcd(a, m) = 1
    if m.is_one() {
        return BigInt::zero();
    }
    let a = a.mod_floor(m);
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// Right neighbor of the reduced fraction `p/q` in the Farey sequence `F_max_den`.
pub fn next_right(p: &BigInt, q: &BigInt, max_den: &BigInt) -> (BigInt, BigInt) {
    // solve p'q - pq' = 1 with the largest q' <= max_den
    if q.is_one() {
        return (p * max_den + 1, max_den.clone());
    }
    // q' = -p^{-1} mod q, lifted maximally
    let inv = mod_inverse(p, q);
    let q0 = (q - inv).mod_floor(q); // -p^{-1} mod q
    let q0 = if q0.is_zero() { q.clone() } else { q0 };
    let k = (max_den - &q0).div_floor(q);
    let qp = q0 + k * q;
    let pp = (BigInt::one() + p * &qp) / q;
    (pp, qp)
}

/// Left neighbor of the reduced fraction `p/q` in `F_max_den`.
pub fn next_left(p: &BigInt, q: &BigInt, max_den: &BigInt) -> (BigInt, BigInt) {
    // solve pq' - p'q = 1 with the largest q' <= max_den
    if q.is_one() {
        return (p * max_den - 1, max_den.clone());
    }
    let inv = mod_inverse(p, q); // q' = p^{-1} mod q
    let q0 = if inv.is_zero() { q.clone() } else { inv };
    let k = (max_den - &q0).div_floor(q);
    let qp = q0 + k * q;
    let pp = (p * &qp - BigInt::one()) / q;
    (pp, qp)
}

/// All reduced fractions with denominator `<= max_den` in the closed interval
/// `[lo, hi]`, ascending. `budget` caps the output length.
pub fn fractions_in_interval(
    lo: &Rational,
    hi: &Rational,
    max_den: &BigInt,
    budget: usize,
) -> crate::Result<Vec<Rational>> {
    assert!(max_den >= &BigInt::one());
    if lo > hi {
        return Ok(Vec::new());
    }
    let anchor = simplest_in_interval(lo, hi);
    if anchor.denom() > max_den {
        return Ok(Vec::new());
    }
    let mut out = vec![anchor.clone()];
    // walk left
    let (mut p, mut q) = (anchor.numer().clone(), anchor.denom().clone());
    loop {
        let (pp, qp) = next_left(&p, &q, max_den);
        let cand = Rational::new(pp.clone(), qp.clone());
        if cand < *lo {
            break;
        }
        out.push(cand);
        p = pp;
        q = qp;
        if out.len() > budget {
            return Err(crate::Error::BudgetExceeded {
                needed: out.len() as u128,
                budget: budget as u128,
            });
        }
    }
    out.reverse();
    let (mut p, mut q) = (anchor.numer().clone(), anchor.denom().clone());
    loop {
        let (pp, qp) = next_right(&p, &q, max_den);
        let cand = Rational::new(pp.clone(), qp.clone());
        if cand > *hi {
            break;
        }
        out.push(cand);
        p = pp;
        q = qp;
        if out.len() > budget {
            return Err(crate::Error::BudgetExceeded {
                needed: out.len() as u128,
                budget: budget as u128,
            });
        }
    }
    Ok(out)
}

/// Continued-fraction terms shared by every point of `[lo, hi]`.
/// Useful for reading partial quotients off a final game enclosure.
pub fn common_cf_prefix(lo: &Rational, hi: &Rational, max_terms: usize) -> Vec<BigInt> {
    assert!(lo <= hi);
    let mut terms = Vec::new();
    let mut a = lo.clone();
    let mut b = hi.clone();
    while terms.len() < max_terms {
        let fa = a.floor();
        let fb = b.floor();
        if fa != fb {
            break;
        }
        terms.push(fa.to_integer());
        let ra = &a - &fa;
        let rb = &b - &fb;
        if ra.is_zero() || rb.is_zero() {
            break;
        }
        let na = Rational::one() / rb;
        let nb = Rational::one() / ra;
        a = na;
        b = nb;
    }
    terms
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn brute_farey(lo: &Rational, hi: &Rational, max_den: i64) -> Vec<Rational> {
        let mut out = Vec::new();
        for q in 1..=max_den {
            let p_lo = (lo * rat_int(q)).ceil().to_integer();
            let p_hi = (hi * rat_int(q)).floor().to_integer();
            let mut p = p_lo.clone();
            while p <= p_hi {
                if p.gcd(&BigInt::from(q)).is_one() {
                    out.push(Rational::new(p.clone(), BigInt::from(q)));
                }
                p += 1;
            }
        }
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn simplest_examples() {
        assert_eq!(simplest_in_interval(&rat(1, 3), &rat(1, 2)), rat(1, 2));
        assert_eq!(simplest_in_interval(&rat(2, 7), &rat(3, 7)), rat(1, 3));
        assert_eq!(simplest_in_interval(&rat(-1, 2), &rat(1, 2)), rat_int(0));
        assert_eq!(simplest_in_interval(&rat(5, 2), &rat(7, 2)), rat_int(3));
        assert_eq!(simplest_in_interval(&rat(-7, 5), &rat(-13, 10)), rat(-4, 3));
    }

    #[test]
    fn neighbors_in_f3() {
        // F_3: ... -1/2 -1/3 0 1/3 1/2 2/3 1 ...
        let (p, q) = next_right(&BigInt::from(-1), &BigInt::from(2), &BigInt::from(3));
        assert_eq!(Rational::new(p, q), rat(-1, 3));
        let (p, q) = next_right(&BigInt::from(0), &BigInt::from(1), &BigInt::from(3));
        assert_eq!(Rational::new(p, q), rat(1, 3));
        let (p, q) = next_left(&BigInt::from(1), &BigInt::from(3), &BigInt::from(3));
        assert_eq!(Rational::new(p, q), rat(0, 1));
        let (p, q) = next_left(&BigInt::from(1), &BigInt::from(1), &BigInt::from(3));
        assert_eq!(Rational::new(p, q), rat(2, 3));
    }

    #[test]
    fn walk_matches_bruteforce() {
        let cases = [
            (rat(-1, 1), rat(1, 1), 7),
            (rat(1, 5), rat(4, 5), 11),
            (rat(-22, 7), rat(-3, 2), 9),
            (rat(0, 1), rat(0, 1), 5),
            (rat(7, 3), rat(7, 3), 4),
        ];
        for (lo, hi, q) in cases {
            let fast =
                fractions_in_interval(&lo, &hi, &BigInt::from(q), 100_000).unwrap();
            let slow = brute_farey(&lo, &hi, q);
            assert_eq!(fast, slow, "interval [{lo}, {hi}], Q={q}");
        }
    }

    #[test]
    fn empty_when_no_small_denominator() {
        let out = fractions_in_interval(&rat(1, 100), &rat(2, 100), &BigInt::from(7), 100)
            .unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn cf_prefix_of_tight_interval() {
        // phi ~ [1; 1, 1, 1, ...]: take convergents 55/34 and 89/55
        let terms = common_cf_prefix(&rat(55, 34), &rat(89, 55), 10);
        assert!(terms.len() >= 5);
        assert_eq!(terms[0], BigInt::from(1));
        assert!(terms[1..].iter().all(|t| t == &BigInt::from(1)));
    }
}
