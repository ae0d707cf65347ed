//! Dense univariate polynomials over `Q` with Sturm-sequence root isolation.
//!
//! Coefficients are stored in ascending degree order; the vector is empty for
//! the zero polynomial and its last entry is nonzero otherwise. Root counting
//! uses sign variations of the Sturm chain of the square-free part, so every
//! interval verdict is exact.

use crate::rational::{rat_int, sign_r, QInterval, Rational};
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly { coeffs: vec![Rational::one()] }
    }

    pub fn x() -> Self {
        UniPoly { coeffs: vec![Rational::zero(), Rational::one()] }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// From ascending-degree coefficients; trailing zeros are stripped.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        let mut p = UniPoly { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    fn normalize(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Interval evaluation by Horner with interval arithmetic; sound but not
    /// tight.
    pub fn eval_interval(&self, x: &QInterval) -> QInterval {
        let mut acc = QInterval::point(Rational::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&QInterval::point(c.clone()));
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * rat_int(i as i64))
            .collect();
        UniPoly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        UniPoly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &Rational) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean remainder of `self` by `other` (`other` nonzero).
    pub fn rem(&self, other: &UniPoly) -> UniPoly {
        assert!(!other.is_zero());
        let mut r = self.clone();
        let d = other.degree().unwrap();
        let lead = other.leading().unwrap().clone();
        while let Some(rd) = r.degree() {
            if rd < d {
                break;
            }
            let f = r.leading().unwrap() / &lead;
            let shift = rd - d;
            let mut sub = vec![Rational::zero(); shift];
            sub.extend(other.coeffs.iter().map(|c| c * &f));
            r = r.sub(&UniPoly::from_coeffs(sub));
        }
        r
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if let Some(l) = a.leading().cloned() {
            a = a.scale(&(Rational::one() / l));
        }
        a
    }

    /// Square-free part (same roots, all simple).
    pub fn square_free(&self) -> UniPoly {
        if self.is_zero() || self.degree() == Some(0) {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.clone();
        }
        self.div_exact(&g)
    }

    fn div_exact(&self, other: &UniPoly) -> UniPoly {
        // quotient of an exact division
        let mut r = self.clone();
        let d = other.degree().unwrap();
        let lead = other.leading().unwrap().clone();
        let mut q = vec![Rational::zero(); self.coeffs.len().saturating_sub(other.coeffs.len()) + 1];
        while let Some(rd) = r.degree() {
            if rd < d {
                break;
            }
            let f = r.leading().unwrap() / &lead;
            let shift = rd - d;
            q[shift] = f.clone();
            let mut sub = vec![Rational::zero(); shift];
            sub.extend(other.coeffs.iter().map(|c| c * &f));
            r = r.sub(&UniPoly::from_coeffs(sub));
        }
        debug_assert!(r.is_zero(), "inexact division");
        UniPoly::from_coeffs(q)
    }
}

/// The Sturm chain of the square-free part of `f`.
pub struct SturmChain {
    chain: Vec<UniPoly>,
}

impl SturmChain {
    pub fn new(f: &UniPoly) -> Result<SturmChain> {
        if f.is_zero() {
            return Err(Error::IdenticallyZero);
        }
        let f = f.square_free();
        let mut chain = vec![f.clone(), f.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].rem(&chain[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        Ok(SturmChain { chain })
    }

    pub fn poly(&self) -> &UniPoly {
        &self.chain[0]
    }

    fn variations_at(&self, x: &Rational) -> usize {
        let signs: Vec<i32> = self
            .chain
            .iter()
            .map(|p| sign_r(&p.eval(x)))
            .filter(|s| *s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots_half_open(&self, a: &Rational, b: &Rational) -> usize {
        if a >= b {
            return 0;
        }
        self.variations_at(a) - self.variations_at(b)
    }

    /// Number of distinct real roots in the closed interval `[a, b]`.
    pub fn count_roots_closed(&self, a: &Rational, b: &Rational) -> usize {
        if a > b {
            return 0;
        }
        let at_a = if self.poly().eval(a).is_zero() { 1 } else { 0 };
        at_a + self.count_roots_half_open(a, b)
    }

    pub fn has_root_closed(&self, a: &Rational, b: &Rational) -> bool {
        self.count_roots_closed(a, b) > 0
    }
}

/// Isolate the distinct real roots of `poly` in the closed interval
/// `[lo, hi]`: pairwise-disjoint closed subintervals, each containing
/// exactly one root. Errors with `IdenticallyZero` on the zero polynomial.
pub fn isolate_roots(poly: &UniPoly, lo: &Rational, hi: &Rational) -> Result<Vec<QInterval>> {
    let chain = SturmChain::new(poly)?;
    if lo > hi {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone())];
    while let Some((a, b)) = stack.pop() {
        let n = chain.count_roots_closed(&a, &b);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(QInterval::new(a, b));
            continue;
        }
        let mid = (&a + &b) / rat_int(2);
        if chain.poly().eval(&mid).is_zero() {
            out.push(QInterval::point(mid.clone()));
            // shrink both halves away from the midpoint root; roots are
            // simple, so a small gap around mid excludes only that root
            let mut eps = (&b - &a) / rat_int(4);
            loop {
                let l_end = &mid - &eps;
                let r_start = &mid + &eps;
                if chain.count_roots_closed(&l_end, &r_start) == 1 {
                    stack.push((a.clone(), l_end));
                    stack.push((r_start, b.clone()));
                    break;
                }
                eps = eps / rat_int(2);
            }
        } else {
            stack.push((a, mid.clone()));
            stack.push((mid, b));
        }
    }
    out.sort_by(|p, q| p.lo.cmp(&q.lo));
    Ok(out)
}

/// Shrink an isolating interval until its width is below `width`.
pub fn refine_root(poly: &UniPoly, iv: &QInterval, width: &Rational) -> QInterval {
    let chain = SturmChain::new(poly).expect("nonzero polynomial");
    debug_assert_eq!(chain.count_roots_closed(&iv.lo, &iv.hi), 1);
    let mut lo = iv.lo.clone();
    let mut hi = iv.hi.clone();
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / rat_int(2);
        if chain.poly().eval(&mid).is_zero() {
            return QInterval::point(mid);
        }
        if chain.count_roots_closed(&lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    QInterval::new(lo, hi)
}

/// Certified enclosure of `sup |f|` over `[lo, hi]`, by uniform subdivision.
/// Refines until the enclosure is relatively tight or `max_pieces` is hit.
pub fn sup_abs_enclosure(f: &UniPoly, lo: &Rational, hi: &Rational, max_pieces: usize) -> QInterval {
    assert!(lo <= hi);
    let mut pieces = 4usize;
    loop {
        let mut upper = Rational::zero();
        let mut lower = Rational::zero();
        let step = (hi - lo) / rat_int(pieces as i64);
        for i in 0..pieces {
            let a = lo + &step * rat_int(i as i64);
            let b = if i + 1 == pieces { hi.clone() } else { lo + &step * rat_int(i as i64 + 1) };
            let iv = f.eval_interval(&QInterval::new(a.clone(), b)).abs();
            if iv.hi > upper {
                upper = iv.hi;
            }
            let v = f.eval(&a).abs();
            if v > lower {
                lower = v;
            }
        }
        let v = f.eval(hi).abs();
        if v > lower {
            lower = v;
        }
        // tight enough when upper <= 2 * lower (or degenerate zero)
        if upper <= &lower * rat_int(2) || pieces >= max_pieces {
            return QInterval::new(lower, upper);
        }
        pieces *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn eval_and_derivative() {
        let f = UniPoly::from_i64(&[-2, 0, 1]); // x^2 - 2
        assert_eq!(f.eval(&rat_int(2)), rat_int(2));
        assert_eq!(f.derivative(), UniPoly::from_i64(&[0, 2]));
    }

    #[test]
    fn isolates_sqrt2() {
        let f = UniPoly::from_i64(&[-2, 0, 1]);
        let roots = isolate_roots(&f, &rat_int(0), &rat_int(2)).unwrap();
        assert_eq!(roots.len(), 1);
        let tight = refine_root(&f, &roots[0], &rat(1, 1_000_000));
        assert!(tight.width() < rat(1, 1_000_000));
        // sqrt(2) in [1.41421356..., 1.41421357...]
        assert!(tight.lo < rat(1414214, 1000000));
        assert!(tight.hi > rat(1414213, 1000000));
    }

    #[test]
    fn no_real_roots() {
        let f = UniPoly::from_i64(&[1, 0, 1]); // x^2 + 1
        let roots = isolate_roots(&f, &rat_int(-10), &rat_int(10)).unwrap();
        assert!(roots.is_empty());
    }

    #[test]
    fn rational_roots_separated() {
        // (x - 1/3)(x - 1/2) = x^2 - 5/6 x + 1/6
        let f = UniPoly::from_coeffs(vec![rat(1, 6), rat(-5, 6), rat_int(1)]);
        let roots = isolate_roots(&f, &rat_int(0), &rat_int(1)).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots[0].contains(&rat(1, 3)));
        assert!(roots[1].contains(&rat(1, 2)));
        assert!(roots[0].hi < roots[1].lo);
    }

    #[test]
    fn zero_poly_rejected() {
        assert_eq!(
            isolate_roots(&UniPoly::zero(), &rat_int(0), &rat_int(1)),
            Err(Error::IdenticallyZero)
        );
    }

    #[test]
    fn multiple_roots_handled_by_square_free() {
        // (x-1)^2 (x+2)
        let f = UniPoly::from_i64(&[2, -3, 0, 1]);
        let roots = isolate_roots(&f, &rat_int(-5), &rat_int(5)).unwrap();
        assert_eq!(roots.len(), 2);
    }

    #[test]
    fn sup_enclosure_brackets_true_sup() {
        // |x^2 - 2| on [0, 2]: sup = 2 at both ends
        let f = UniPoly::from_i64(&[-2, 0, 1]);
        let iv = sup_abs_enclosure(&f, &rat_int(0), &rat_int(2), 256);
        assert!(iv.lo <= rat_int(2) && rat_int(2) <= iv.hi);
        assert!(iv.lo >= rat_int(1)); // easily attained at x = 0
    }
}
