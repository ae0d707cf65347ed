//! Real algebraic numbers as (polynomial, isolating interval) pairs.
//!
//! Targets for approximation experiments are given this way: the interval
//! can be refined by Sturm bisection to any requested width, so distance
//! comparisons stay certified. For quadratic irrationals the module also
//! produces the exact continued-fraction expansion via the standard surd
//! recurrence, and from it the convergents and intermediate fractions that
//! contain all best rational approximations; these drive the independent
//! approximation oracle.

use crate::rational::{rat_int, QInterval, Rational};
use crate::unipoly::{refine_root, SturmChain, UniPoly};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A real algebraic number: square-free polynomial plus an isolating
/// interval containing exactly one real root.
#[derive(Debug, Clone)]
pub struct AlgebraicNumber {
    poly: UniPoly,
    interval: QInterval,
}

impl AlgebraicNumber {
    pub fn new(poly: &UniPoly, lo: Rational, hi: Rational) -> Result<AlgebraicNumber> {
        if poly.is_zero() {
            return Err(Error::IdenticallyZero);
        }
        let sf = poly.square_free();
        let chain = SturmChain::new(&sf)?;
        let count = chain.count_roots_closed(&lo, &hi);
        if count != 1 {
            return Err(Error::Unsupported(format!(
                "interval [{lo}, {hi}] isolates {count} roots, need exactly 1"
            )));
        }
        Ok(AlgebraicNumber { poly: sf, interval: QInterval::new(lo, hi) })
    }

    pub fn from_rational(r: Rational) -> AlgebraicNumber {
        // root of x - r
        let poly = UniPoly::from_coeffs(vec![-r.clone(), Rational::one()]);
        AlgebraicNumber { poly, interval: QInterval::point(r) }
    }

    pub fn poly(&self) -> &UniPoly {
        &self.poly
    }

    pub fn interval(&self) -> &QInterval {
        &self.interval
    }

    /// Enclosure of width at most `width`.
    pub fn enclosure(&self, width: &Rational) -> QInterval {
        if self.interval.width() <= *width {
            return self.interval.clone();
        }
        refine_root(&self.poly, &self.interval, width)
    }

    /// Permanently tighten the stored interval.
    pub fn refine(&mut self, width: &Rational) {
        self.interval = self.enclosure(width);
    }

    pub fn to_f64(&self) -> f64 {
        let iv = self.enclosure(&Rational::new(BigInt::one(), BigInt::one() << 80));
        crate::rational::to_f64(&iv.midpoint())
    }

    /// `Some(r)` if the number is exactly rational (degree-one factor hit).
    pub fn as_rational(&self) -> Option<Rational> {
        if self.interval.is_point() {
            return Some(self.interval.lo.clone());
        }
        None
    }
}

/// Exact continued fraction of a quadratic irrational `(P + sqrt(D)) / Q`.
///
/// Invariant maintained by scaling: `Q | D - P^2`. Terms after the first are
/// always positive; `D` must not be a perfect square.
#[derive(Debug, Clone)]
pub struct QuadraticSurd {
    p: BigInt,
    q: BigInt,
    d: BigInt,
    sqrt_d_floor: BigInt,
}

impl QuadraticSurd {
    /// Build from a degree-two integer polynomial `a x^2 + b x + c` and an
    /// isolating interval selecting one of its two real roots.
    pub fn from_quadratic(poly: &UniPoly, interval: &QInterval) -> Result<QuadraticSurd> {
        if poly.degree() != Some(2) {
            return Err(Error::Unsupported("quadratic polynomial required".into()));
        }
        // clear denominators to integers
        let l = crate::rational::lcm_denoms(poly.coeffs());
        let ints: Vec<BigInt> = poly
            .coeffs()
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect();
        let (c, b, a) = (ints[0].clone(), ints[1].clone(), ints[2].clone());
        let disc = &b * &b - BigInt::from(4) * &a * &c;
        if !disc.is_positive() {
            return Err(Error::Unsupported("no real roots".into()));
        }
        let s = disc.sqrt();
        if &s * &s == disc {
            return Err(Error::Unsupported("rational roots, not a quadratic irrational".into()));
        }
        // decide the branch: roots are (-b ± sqrt(disc)) / (2a); compare the
        // interval against the vertex -b / 2a after refining if needed
        let vertex = Rational::new(-b.clone(), BigInt::from(2) * &a);
        let chain = SturmChain::new(poly)?;
        let mut iv = interval.clone();
        while iv.contains(&vertex) {
            let width = iv.width() / rat_int(4);
            if width.is_zero() {
                return Err(Error::Unsupported("interval degenerated onto the vertex".into()));
            }
            iv = refine_root(&chain.poly().clone(), &iv, &width);
        }
        // plus branch iff the root is right of the vertex and a > 0, etc.
        let plus = (iv.lo > vertex) == a.is_positive();
        let (mut p, mut q) = if plus {
            (-b.clone(), BigInt::from(2) * &a)
        } else {
            (b.clone(), BigInt::from(-2) * &a)
        };
        let mut d = disc;
        // normalize so that q | d - p^2
        let rem = (&d - &p * &p) % &q;
        if !rem.is_zero() {
            let scale = q.abs();
            p *= &scale;
            d *= &scale * &scale;
            q *= &scale;
        }
        let sqrt_d_floor = d.sqrt();
        Ok(QuadraticSurd { p, q, d, sqrt_d_floor })
    }

    /// Next continued-fraction term and updated state.
    fn step(&mut self) -> BigInt {
        // floor((p + sqrt(d)) / q), exact for irrational sqrt(d)
        let num_lo = &self.p + &self.sqrt_d_floor;
        let a = if self.q.is_positive() {
            num_lo.div_floor(&self.q)
        } else {
            // value in ((p + s + 1)/q, (p + s)/q) for q < 0
            (&num_lo + BigInt::one()).div_floor(&self.q)
        };
        let p_next = &a * &self.q - &self.p;
        let q_next = (&self.d - &p_next * &p_next) / &self.q;
        self.p = p_next;
        self.q = q_next;
        a
    }

    /// First `count` continued-fraction terms.
    pub fn cf_terms(&mut self, count: usize) -> Vec<BigInt> {
        (0..count).map(|_| self.step()).collect()
    }
}

/// Convergents `h_i / k_i` of a continued fraction, while `k_i <= max_den`.
pub fn convergents(terms: &[BigInt], max_den: &BigInt) -> Vec<Rational> {
    let mut out = Vec::new();
    let (mut h_prev, mut k_prev) = (BigInt::one(), BigInt::zero());
    let (mut h, mut k) = (terms[0].clone(), BigInt::one());
    out.push(Rational::new(h.clone(), k.clone()));
    for a in &terms[1..] {
        let h_next = a * &h + &h_prev;
        let k_next = a * &k + &k_prev;
        if &k_next > max_den {
            break;
        }
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
        out.push(Rational::new(h.clone(), k.clone()));
    }
    out
}

/// Convergents plus all intermediate (semiconvergent) fractions with
/// denominator at most `max_den`. Every best rational approximation of the
/// target is in this list, so a staircase built from it is complete.
pub fn approximation_candidates(terms: &[BigInt], max_den: &BigInt) -> Vec<Rational> {
    let mut out = Vec::new();
    let (mut h_prev, mut k_prev) = (BigInt::one(), BigInt::zero());
    let (mut h, mut k) = (terms[0].clone(), BigInt::one());
    out.push(Rational::new(h.clone(), k.clone()));
    'outer: for a in &terms[1..] {
        let a_u = a.to_u64().unwrap_or(u64::MAX);
        for j in 1..=a_u {
            let jb = BigInt::from(j);
            let num = &jb * &h + &h_prev;
            let den = &jb * &k + &k_prev;
            if &den > max_den {
                break 'outer;
            }
            out.push(Rational::new(num, den));
        }
        let h_next = a * &h + &h_prev;
        let k_next = a * &k + &k_prev;
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
    }
    out
}

/// Parse a polynomial in `x` with integer coefficients, e.g. `x^2-x-1`
/// or `2x^3 + x - 5`.
pub fn parse_poly(s: &str) -> Option<UniPoly> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return None;
    }
    let mut terms: Vec<(i64, u32)> = Vec::new();
    let mut rest = compact.as_str();
    let mut sign = 1i64;
    if let Some(r) = rest.strip_prefix('-') {
        sign = -1;
        rest = r;
    } else if let Some(r) = rest.strip_prefix('+') {
        rest = r;
    }
    while !rest.is_empty() {
        let end = rest[1..]
            .find(['+', '-'])
            .map(|i| i + 1)
            .unwrap_or(rest.len());
        let term = &rest[..end];
        let (coeff_str, exp) = match term.find('x') {
            None => (term, 0u32),
            Some(xi) => {
                let c = &term[..xi];
                let after = &term[xi + 1..];
                let e = if after.is_empty() {
                    1
                } else {
                    after.strip_prefix('^')?.parse().ok()?
                };
                (c, e)
            }
        };
        let coeff: i64 = match coeff_str {
            "" => 1,
            "*" => 1,
            c => c.trim_end_matches('*').parse().ok()?,
        };
        terms.push((sign * coeff, exp));
        if end == rest.len() {
            break;
        }
        sign = if rest.as_bytes()[end] == b'-' { -1 } else { 1 };
        rest = &rest[end + 1..];
    }
    let deg = terms.iter().map(|(_, e)| *e).max()? as usize;
    let mut coeffs = vec![Rational::zero(); deg + 1];
    for (c, e) in terms {
        coeffs[e as usize] += rat_int(c);
    }
    let p = UniPoly::from_coeffs(coeffs);
    if p.is_zero() {
        None
    } else {
        Some(p)
    }
}

/// Golden ratio as an algebraic number (handy in tests and examples).
pub fn golden_ratio() -> AlgebraicNumber {
    let poly = UniPoly::from_i64(&[-1, -1, 1]);
    AlgebraicNumber::new(&poly, rat_int(1), rat_int(2)).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn enclosures_shrink() {
        let phi = golden_ratio();
        let iv = phi.enclosure(&rat(1, 1_000_000));
        assert!(iv.width() <= rat(1, 1_000_000));
        // phi = 1.6180339887...
        assert!(iv.lo < rat(16180340, 10000000));
        assert!(iv.hi > rat(16180339, 10000000));
    }

    #[test]
    fn rational_detection() {
        let x = AlgebraicNumber::from_rational(rat(3, 7));
        assert_eq!(x.as_rational(), Some(rat(3, 7)));
        assert!(golden_ratio().as_rational().is_none());
    }

    #[test]
    fn phi_continued_fraction_all_ones() {
        let phi = golden_ratio();
        let mut surd =
            QuadraticSurd::from_quadratic(phi.poly(), phi.interval()).unwrap();
        let terms = surd.cf_terms(12);
        assert!(terms.iter().all(|t| t == &BigInt::one()));
    }

    #[test]
    fn sqrt2_continued_fraction() {
        let p = UniPoly::from_i64(&[-2, 0, 1]);
        let x = AlgebraicNumber::new(&p, rat_int(1), rat_int(2)).unwrap();
        let mut surd = QuadraticSurd::from_quadratic(x.poly(), x.interval()).unwrap();
        let terms = surd.cf_terms(8);
        assert_eq!(terms[0], BigInt::one());
        assert!(terms[1..].iter().all(|t| t == &BigInt::from(2)));
    }

    #[test]
    fn negative_branch_cf() {
        // the other root of x^2 - x - 1 is (1 - sqrt5)/2 = -0.618...
        let p = UniPoly::from_i64(&[-1, -1, 1]);
        let x = AlgebraicNumber::new(&p, rat_int(-1), rat_int(0)).unwrap();
        let mut surd = QuadraticSurd::from_quadratic(x.poly(), x.interval()).unwrap();
        let terms = surd.cf_terms(6);
        // -0.618... = [-1; 2, 1, 1, 1, ...]
        assert_eq!(terms[0], BigInt::from(-1));
        assert_eq!(terms[1], BigInt::from(2));
        assert!(terms[2..].iter().all(|t| t == &BigInt::one()));
    }

    #[test]
    fn phi_convergents_are_fibonacci() {
        let phi = golden_ratio();
        let mut surd = QuadraticSurd::from_quadratic(phi.poly(), phi.interval()).unwrap();
        let terms = surd.cf_terms(16);
        let conv = convergents(&terms, &BigInt::from(100));
        let expected =
            ["1/1", "2/1", "3/2", "5/3", "8/5", "13/8", "21/13", "34/21", "55/34", "89/55", "144/89"];
        let got: Vec<String> = conv.iter().map(crate::rational::rational_str).collect();
        assert_eq!(got, expected.to_vec());
    }

    #[test]
    fn candidates_superset_of_convergents() {
        let p = UniPoly::from_i64(&[-2, 0, 1]);
        let x = AlgebraicNumber::new(&p, rat_int(1), rat_int(2)).unwrap();
        let mut surd = QuadraticSurd::from_quadratic(x.poly(), x.interval()).unwrap();
        let terms = surd.cf_terms(10);
        let conv = convergents(&terms, &BigInt::from(1000));
        let cands = approximation_candidates(&terms, &BigInt::from(1000));
        for c in conv {
            assert!(cands.contains(&c));
        }
    }

    #[test]
    fn poly_parser() {
        assert_eq!(parse_poly("x^2-x-1").unwrap(), UniPoly::from_i64(&[-1, -1, 1]));
        assert_eq!(parse_poly("x^2 - 2").unwrap(), UniPoly::from_i64(&[-2, 0, 1]));
        assert_eq!(parse_poly("2x^3+x-5").unwrap(), UniPoly::from_i64(&[-5, 1, 0, 2]));
        assert_eq!(parse_poly("-x+3").unwrap(), UniPoly::from_i64(&[3, -1]));
        assert_eq!(parse_poly("7").unwrap(), UniPoly::from_i64(&[7]));
        assert!(parse_poly("").is_none());
    }
}
