//! Exact rationals, dyadic helpers, and closed rational interval arithmetic.
//!
//! `Rational` is `num_rational::BigRational`: always in lowest terms with a
//! positive denominator, which is exactly the canonical form required
//! everywhere in this crate. All distances use the max norm.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical `num/den` string, denominator always explicit.
pub fn rational_str(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `"a/b"` or `"a"` into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(Rational::from_integer(n))
        }
    }
}

/// Approximate value for summaries; exact paths never consult this.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back to a scaled quotient for extreme magnitudes
        let scaled: BigInt = (r.numer() << 64u32) / r.denom();
        scaled.to_f64().unwrap_or(f64::NAN) / 2f64.powi(64)
    })
}

/// `r^e` for a signed integer exponent. Panics on `0^negative`.
pub fn pow_i64(r: &Rational, e: i64) -> Rational {
    if e >= 0 {
        let n = r.numer().pow(e as u32);
        let d = r.denom().pow(e as u32);
        Rational::new(n, d)
    } else {
        assert!(!r.is_zero(), "zero to a negative power");
        let n = r.numer().pow((-e) as u32);
        let d = r.denom().pow((-e) as u32);
        Rational::new(d, n)
    }
}

/// Floor of a rational as a big integer.
pub fn floor_int(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

/// Largest `u >= 0` with `2^-u >= r`, for `0 < r <= 1`.
pub fn dyadic_level(r: &Rational) -> u64 {
    assert!(r.is_positive() && *r <= Rational::one());
    // 2^u <= 1/r  <=>  num * 2^u <= den
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    let mut u = (den.bits() - num.bits()).saturating_sub(0);
    // adjust: u is near den.bits() - num.bits(); correct by comparison
    while (num << (u + 1)) <= *den {
        u += 1;
    }
    while u > 0 && (num << u) > *den {
        u -= 1;
    }
    if (num << u) > *den {
        0
    } else {
        u
    }
}

/// Floor of the `n`-th root of a nonnegative integer.
pub fn nth_root_floor(x: &BigInt, n: u32) -> BigInt {
    assert!(!x.is_negative());
    x.nth_root(n)
}

/// Enclosure `[lo, hi]` of `base^(p/q)` for a positive integer `base`,
/// with `hi - lo <= 2^-bits`. Exponent `p/q` must be nonnegative.
pub fn pow_rational_enclosure(base: &BigInt, exp: &Rational, bits: u64) -> QInterval {
    assert!(base.is_positive());
    assert!(!exp.is_negative());
    let p = exp.numer().to_u32().expect("exponent numerator too large");
    let q = exp.denom().to_u32().expect("exponent denominator too large");
    if q == 1 {
        let v = Rational::from_integer(base.pow(p));
        return QInterval::point(v);
    }
    // floor((base^p * 2^(q*bits))^(1/q)) / 2^bits
    let scaled = base.pow(p) << (q as u64 * bits);
    let root = scaled.nth_root(q);
    let denom = BigInt::one() << bits;
    QInterval::new(
        Rational::new(root.clone(), denom.clone()),
        Rational::new(root + 1, denom),
    )
}

/// A closed interval with exact rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl QInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "inverted interval");
        QInterval { lo, hi }
    }

    pub fn point(v: Rational) -> Self {
        QInterval { lo: v.clone(), hi: v }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / rat_int(2)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains(&self, v: &Rational) -> bool {
        self.lo <= *v && *v <= self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn add(&self, other: &Self) -> Self {
        QInterval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &Self) -> Self {
        QInterval::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn neg(&self) -> Self {
        QInterval::new(-self.hi.clone(), -self.lo.clone())
    }

    /// Product of two intervals treated as independent quantities.
    pub fn mul(&self, other: &Self) -> Self {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        QInterval::new(lo, hi)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_negative() {
            QInterval::new(&self.hi * c, &self.lo * c)
        } else {
            QInterval::new(&self.lo * c, &self.hi * c)
        }
    }

    /// `self^e` as a dependent power (correct for even exponents
    /// straddling zero, unlike repeated `mul`).
    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return QInterval::point(Rational::one());
        }
        let lp = pow_i64(&self.lo, e as i64);
        let hp = pow_i64(&self.hi, e as i64);
        if e % 2 == 1 {
            QInterval::new(lp, hp)
        } else if self.contains_zero() {
            QInterval::new(Rational::zero(), lp.max(hp))
        } else {
            QInterval::new(lp.clone().min(hp.clone()), lp.max(hp))
        }
    }

    /// Division, requiring the divisor interval to exclude zero.
    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.contains_zero(), "division by interval containing zero");
        let inv = QInterval::new(
            Rational::one() / other.hi.clone(),
            Rational::one() / other.lo.clone(),
        );
        self.mul(&inv)
    }

    /// Interval of `|x|` over the interval.
    pub fn abs(&self) -> Self {
        if self.contains_zero() {
            QInterval::new(Rational::zero(), self.lo.abs().max(self.hi.abs()))
        } else {
            let a = self.lo.abs();
            let b = self.hi.abs();
            QInterval::new(a.clone().min(b.clone()), a.max(b))
        }
    }

    /// Interval of `|x - r|` for `x` in the interval and a fixed rational `r`.
    pub fn abs_dist(&self, r: &Rational) -> Self {
        self.sub(&QInterval::point(r.clone())).abs()
    }

    /// Componentwise max of two intervals (as interval of `max(x, y)`).
    pub fn join_max(&self, other: &Self) -> Self {
        QInterval::new(
            self.lo.clone().max(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
        )
    }

    /// Certified strict comparison: `Some(true)` if every value here is
    /// strictly below every value of `other`, `Some(false)` for the reverse
    /// (nothing here below anything there), `None` if the intervals overlap.
    pub fn certified_lt(&self, other: &Self) -> Option<bool> {
        if self.hi < other.lo {
            Some(true)
        } else if self.lo >= other.hi {
            Some(false)
        } else {
            None
        }
    }
}

/// Max-norm distance interval between an ambient box and an exact point.
pub fn box_point_dist(coords: &[QInterval], point: &[Rational]) -> QInterval {
    assert_eq!(coords.len(), point.len());
    let mut acc = QInterval::point(Rational::zero());
    for (iv, r) in coords.iter().zip(point.iter()) {
        acc = acc.join_max(&iv.abs_dist(r));
    }
    acc
}

/// First `n` primes (for per-axis low-discrepancy bases).
pub fn first_primes(n: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(n);
    let mut cand = 2u64;
    while primes.len() < n {
        if primes.iter().all(|p| cand % p != 0) {
            primes.push(cand);
        }
        cand += 1;
    }
    primes
}

/// `i`-th element of the base-`b` van der Corput sequence, exactly.
pub fn van_der_corput(mut i: u64, base: u64) -> Rational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    let b = BigInt::from(base);
    while i > 0 {
        num = num * &b + BigInt::from(i % base);
        den *= &b;
        i /= base;
    }
    Rational::new(num, den)
}

/// gcd of a slice of integers (nonnegative result; 0 for empty/all-zero).
pub fn gcd_all(values: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for v in values {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    g
}

/// lcm of denominators of a slice of rationals (always >= 1).
pub fn lcm_denoms(values: &[Rational]) -> BigInt {
    let mut l = BigInt::one();
    for v in values {
        l = l.lcm(v.denom());
    }
    l
}

/// Sign of a big integer as -1 / 0 / 1.
pub fn sign_i(v: &BigInt) -> i32 {
    match v.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Sign of a rational as -1 / 0 / 1.
pub fn sign_r(v: &Rational) -> i32 {
    sign_i(v.numer())
}

/// Convert a `BigUint` to `BigInt`.
pub fn to_bigint(u: &BigUint) -> BigInt {
    BigInt::from(u.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let r = rat(2, -6);
        assert_eq!(r, rat(-1, 3));
        assert_eq!(rational_str(&r), "-1/3");
        assert_eq!(parse_rational("-1/3"), Some(rat(-1, 3)));
        assert_eq!(parse_rational("7"), Some(rat_int(7)));
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn dyadic_levels() {
        assert_eq!(dyadic_level(&rat(1, 1)), 0);
        assert_eq!(dyadic_level(&rat(1, 2)), 1);
        assert_eq!(dyadic_level(&rat(1, 4)), 2);
        assert_eq!(dyadic_level(&rat(3, 8)), 1); // 2^-1 = 1/2 >= 3/8 > 1/4
        assert_eq!(dyadic_level(&rat(1, 3)), 1);
        assert_eq!(dyadic_level(&rat(1, 1048576)), 20);
    }

    #[test]
    fn interval_pow_straddling_zero() {
        let iv = QInterval::new(rat(-2, 1), rat(1, 1));
        let sq = iv.pow(2);
        assert_eq!(sq.lo, rat_int(0));
        assert_eq!(sq.hi, rat_int(4));
        let cube = iv.pow(3);
        assert_eq!(cube.lo, rat_int(-8));
        assert_eq!(cube.hi, rat_int(1));
    }

    #[test]
    fn root_enclosures() {
        let iv = pow_rational_enclosure(&BigInt::from(2), &rat(1, 2), 40);
        assert!(iv.width() <= rat(1, 1 << 40));
        let two = rat_int(2);
        assert!(iv.lo.clone() * iv.lo.clone() <= two);
        assert!(iv.hi.clone() * iv.hi.clone() >= two);
    }

    #[test]
    fn van_der_corput_exact() {
        assert_eq!(van_der_corput(1, 2), rat(1, 2));
        assert_eq!(van_der_corput(2, 2), rat(1, 4));
        assert_eq!(van_der_corput(3, 2), rat(3, 4));
        assert_eq!(van_der_corput(1, 3), rat(1, 3));
    }
}
