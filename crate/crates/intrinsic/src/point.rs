//! Reduced rational points of `Q^d` and their heights.
//!
//! A point is stored as integer numerators over one positive denominator `q`
//! with `gcd(p_1, ..., p_d, q) = 1`. The height of the point is `q`.

use crate::rational::{gcd_all, lcm_denoms, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// A point of `Q^d` in jointly reduced form; its height is the denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalPoint {
    numerators: Vec<BigInt>,
    denominator: BigInt,
}

impl RationalPoint {
    /// Clear denominators and common factors of a rational vector.
    ///
    /// The returned point equals the input componentwise, is jointly
    /// primitive, and its height is the least common positive denominator.
    pub fn reduce(components: &[Rational]) -> RationalPoint {
        assert!(!components.is_empty(), "empty point");
        let l = lcm_denoms(components);
        let mut numerators: Vec<BigInt> = components
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect();
        let mut denominator = l;
        let mut all = numerators.clone();
        all.push(denominator.clone());
        let g = gcd_all(&all);
        if g > BigInt::one() {
            for n in numerators.iter_mut() {
                *n /= &g;
            }
            denominator /= &g;
        }
        debug_assert!(denominator.is_positive());
        RationalPoint { numerators, denominator }
    }

    /// Build directly from jointly primitive data. Debug-asserts primitivity.
    pub fn from_raw(numerators: Vec<BigInt>, denominator: BigInt) -> RationalPoint {
        assert!(denominator.is_positive());
        debug_assert!({
            let mut all = numerators.clone();
            all.push(denominator.clone());
            gcd_all(&all).is_one()
        });
        RationalPoint { numerators, denominator }
    }

    pub fn dim(&self) -> usize {
        self.numerators.len()
    }

    /// The height `H(p/q) = q`.
    pub fn height(&self) -> &BigInt {
        &self.denominator
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.numerators
    }

    pub fn coordinate(&self, i: usize) -> Rational {
        Rational::new(self.numerators[i].clone(), self.denominator.clone())
    }

    pub fn coords(&self) -> Vec<Rational> {
        (0..self.dim()).map(|i| self.coordinate(i)).collect()
    }

    /// Max-norm distance to a rational vector.
    pub fn dist_max(&self, other: &[Rational]) -> Rational {
        assert_eq!(self.dim(), other.len());
        let mut best = Rational::zero();
        for (i, o) in other.iter().enumerate() {
            let d = (self.coordinate(i) - o).abs();
            if d > best {
                best = d;
            }
        }
        best
    }

    /// Max-norm distance to another point.
    pub fn dist_max_point(&self, other: &RationalPoint) -> Rational {
        self.dist_max(&other.coords())
    }

    /// True if every coordinate lies in the closed box.
    pub fn in_box(&self, bx: &[(Rational, Rational)]) -> bool {
        assert_eq!(self.dim(), bx.len());
        (0..self.dim()).all(|i| {
            let c = self.coordinate(i);
            bx[i].0 <= c && c <= bx[i].1
        })
    }

    /// Canonical string `n1,n2,...,nd/q`.
    pub fn to_record(&self) -> String {
        let nums: Vec<String> = self.numerators.iter().map(|n| n.to_string()).collect();
        format!("{}/{}", nums.join(","), self.denominator)
    }

    pub fn parse_record(s: &str) -> Option<RationalPoint> {
        let (nums, den) = s.rsplit_once('/')?;
        let denominator: BigInt = den.parse().ok()?;
        let numerators: Option<Vec<BigInt>> =
            nums.split(',').map(|p| p.trim().parse().ok()).collect();
        let numerators = numerators?;
        if denominator.is_positive() && !numerators.is_empty() {
            Some(RationalPoint::from_raw(numerators, denominator))
        } else {
            None
        }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .numerators
            .iter()
            .map(|n| format!("{}/{}", n, self.denominator))
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl PartialOrd for RationalPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Points sort by (height, numerators); used for deterministic output.
impl Ord for RationalPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.denominator
            .cmp(&other.denominator)
            .then_with(|| self.numerators.cmp(&other.numerators))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    #[test]
    fn reduce_clears_to_lcm() {
        let p = RationalPoint::reduce(&[rat(1, 2), rat(1, 4)]);
        assert_eq!(p.numerators(), &[BigInt::from(2), BigInt::from(1)]);
        assert_eq!(p.height(), &BigInt::from(4));
    }

    #[test]
    fn reduce_zero_is_canonical() {
        let p = RationalPoint::reduce(&[rat_int(0), rat_int(0)]);
        assert_eq!(p.numerators(), &[BigInt::from(0), BigInt::from(0)]);
        assert_eq!(p.height(), &BigInt::from(1));
    }

    #[test]
    fn reduce_strips_common_factors() {
        let p = RationalPoint::reduce(&[rat(2, 6), rat(1, 3)]);
        assert_eq!(p.numerators(), &[BigInt::from(1), BigInt::from(1)]);
        assert_eq!(p.height(), &BigInt::from(3));
    }

    #[test]
    fn record_round_trip() {
        let p = RationalPoint::reduce(&[rat(-3, 5), rat(4, 5)]);
        assert_eq!(p.to_record(), "-3,4/5");
        assert_eq!(RationalPoint::parse_record("-3,4/5"), Some(p));
    }

    #[test]
    fn max_norm_distance() {
        let p = RationalPoint::reduce(&[rat(1, 2), rat(1, 4)]);
        let d = p.dist_max(&[rat_int(0), rat_int(0)]);
        assert_eq!(d, rat(1, 2));
    }
}
