//! Sparse multivariate polynomials over `Q` and simple rational functions.
//!
//! `MPoly` stores terms in a `BTreeMap` keyed by exponent vectors. `RatFunc`
//! is `num / den^den_pow` with a shared denominator base, which is all the
//! charts here need; quotient-rule derivatives only ever deepen the power.

use crate::multiindex::MultiIndex;
use crate::rational::{rat_int, QInterval, Rational};
use crate::unipoly::UniPoly;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    vars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MPoly {
    pub fn zero(vars: usize) -> Self {
        MPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: usize, c: Rational) -> Self {
        let mut p = MPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars], c);
        }
        p
    }

    pub fn one(vars: usize) -> Self {
        Self::constant(vars, Rational::one())
    }

    /// The variable `t_i`.
    pub fn var(vars: usize, i: usize) -> Self {
        assert!(i < vars);
        let mut exp = vec![0; vars];
        exp[i] = 1;
        let mut p = MPoly::zero(vars);
        p.terms.insert(exp, Rational::one());
        p
    }

    /// The monomial `t^alpha`.
    pub fn monomial(alpha: &MultiIndex, c: Rational) -> Self {
        let mut p = MPoly::zero(alpha.len());
        if !c.is_zero() {
            p.terms.insert(alpha.exponents().to_vec(), c);
        }
        p
    }

    pub fn from_terms(vars: usize, terms: Vec<(Vec<u32>, Rational)>) -> Self {
        let mut p = MPoly::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars);
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            let key: Vec<Vec<u32>> = self
                .terms
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.vars, other.vars);
        let mut p = self.clone();
        for (e, c) in other.terms.iter() {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.vars);
        }
        MPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.vars, other.vars);
        let mut p = MPoly::zero(self.vars);
        for (ea, ca) in self.terms.iter() {
            for (eb, cb) in other.terms.iter() {
                let exp: Vec<u32> = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                p.add_term(exp, ca * cb);
            }
        }
        p
    }

    pub fn eval(&self, t: &[Rational]) -> Rational {
        assert_eq!(t.len(), self.vars);
        let mut acc = Rational::zero();
        for (e, c) in self.terms.iter() {
            let mut term = c.clone();
            for (i, &pow) in e.iter().enumerate() {
                if pow > 0 {
                    term *= crate::rational::pow_i64(&t[i], pow as i64);
                }
            }
            acc += term;
        }
        acc
    }

    /// Sound interval evaluation over a box (term-wise, not tight).
    pub fn eval_interval(&self, t: &[QInterval]) -> QInterval {
        assert_eq!(t.len(), self.vars);
        let mut acc = QInterval::point(Rational::zero());
        for (e, c) in self.terms.iter() {
            let mut term = QInterval::point(c.clone());
            for (i, &pow) in e.iter().enumerate() {
                if pow > 0 {
                    term = term.mul(&t[i].pow(pow));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Exact vanishing test at `p/q` without building rationals: evaluates
    /// the homogenized integer form `sum c_e * p^e * q^(deg - |e|)`.
    /// Requires integer coefficients.
    pub fn vanishes_at_fraction(&self, p: &[BigInt], q: &BigInt) -> bool {
        assert_eq!(p.len(), self.vars);
        let Some(deg) = self.degree() else { return true };
        let mut acc = BigInt::zero();
        for (e, c) in self.terms.iter() {
            debug_assert!(c.denom().is_one(), "integer coefficients required");
            let mut term = c.numer().clone();
            let mut total: u32 = 0;
            for (i, &pow) in e.iter().enumerate() {
                total += pow;
                if pow > 0 {
                    term *= p[i].pow(pow);
                }
            }
            term *= q.pow(deg - total);
            acc += term;
        }
        acc.is_zero()
    }

    /// Partial derivative in variable `i`.
    pub fn partial(&self, i: usize) -> MPoly {
        assert!(i < self.vars);
        let mut p = MPoly::zero(self.vars);
        for (e, c) in self.terms.iter() {
            if e[i] == 0 {
                continue;
            }
            let mut exp = e.clone();
            exp[i] -= 1;
            p.add_term(exp, c * rat_int(e[i] as i64));
        }
        p
    }

    /// `d^alpha`, iterated partial derivatives.
    pub fn partial_multi(&self, alpha: &MultiIndex) -> MPoly {
        assert_eq!(alpha.len(), self.vars);
        let mut p = self.clone();
        for (i, &n) in alpha.exponents().iter().enumerate() {
            for _ in 0..n {
                p = p.partial(i);
                if p.is_zero() {
                    return p;
                }
            }
        }
        p
    }

    /// Convert a one-variable polynomial to dense univariate form.
    pub fn to_unipoly(&self) -> Result<UniPoly> {
        if self.vars != 1 {
            return Err(Error::Unsupported(format!(
                "univariate conversion of a {}-variable polynomial",
                self.vars
            )));
        }
        let deg = self.degree().unwrap_or(0) as usize;
        let mut coeffs = vec![Rational::zero(); deg + 1];
        for (e, c) in self.terms.iter() {
            coeffs[e[0] as usize] = c.clone();
        }
        Ok(UniPoly::from_coeffs(coeffs))
    }

    /// Serialize as `coeff*e1,e2;...` terms joined by `|` (exact).
    pub fn to_record(&self) -> String {
        let mut parts = vec![self.vars.to_string()];
        for (e, c) in self.terms.iter() {
            let exps: Vec<String> = e.iter().map(|x| x.to_string()).collect();
            parts.push(format!("{}*{}", crate::rational::rational_str(c), exps.join(",")));
        }
        parts.join("|")
    }

    pub fn parse_record(s: &str) -> Option<MPoly> {
        let mut it = s.split('|');
        let vars: usize = it.next()?.parse().ok()?;
        let mut terms = Vec::new();
        for part in it {
            let (c, e) = part.split_once('*')?;
            let coeff = crate::rational::parse_rational(c)?;
            let exps: Option<Vec<u32>> = e.split(',').map(|x| x.parse().ok()).collect();
            terms.push((exps?, coeff));
        }
        Some(MPoly::from_terms(vars, terms))
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c)?;
            for (i, &pow) in e.iter().enumerate() {
                if pow == 1 {
                    write!(f, "*t{}", i + 1)?;
                } else if pow > 1 {
                    write!(f, "*t{}^{}", i + 1, pow)?;
                }
            }
        }
        Ok(())
    }
}

/// `num / den^den_pow`; `den_pow == 0` means a plain polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc {
    pub num: MPoly,
    pub den: MPoly,
    pub den_pow: u32,
}

impl RatFunc {
    pub fn poly(num: MPoly) -> Self {
        let vars = num.vars();
        RatFunc { num, den: MPoly::one(vars), den_pow: 0 }
    }

    pub fn new(num: MPoly, den: MPoly, den_pow: u32) -> Self {
        assert_eq!(num.vars(), den.vars());
        assert!(!den.is_zero() || den_pow == 0);
        RatFunc { num, den, den_pow }
    }

    pub fn vars(&self) -> usize {
        self.num.vars()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den_pow == 0
    }

    pub fn eval(&self, t: &[Rational]) -> Result<Rational> {
        let n = self.num.eval(t);
        if self.den_pow == 0 {
            return Ok(n);
        }
        let d = self.den.eval(t);
        if d.is_zero() {
            return Err(Error::PoleHit(format!(
                "{:?}",
                t.iter().map(crate::rational::rational_str).collect::<Vec<_>>()
            )));
        }
        Ok(n / crate::rational::pow_i64(&d, self.den_pow as i64))
    }

    /// Interval evaluation; requires the denominator interval to exclude 0
    /// when `den_pow > 0`.
    pub fn eval_interval(&self, t: &[QInterval]) -> Result<QInterval> {
        let n = self.num.eval_interval(t);
        if self.den_pow == 0 {
            return Ok(n);
        }
        let d = self.den.eval_interval(t).pow(self.den_pow);
        if d.contains_zero() {
            return Err(Error::PoleHit("denominator interval straddles zero".into()));
        }
        Ok(n.div(&d))
    }

    /// Quotient-rule partial derivative: `(N' D - m N D') / D^(m+1)`.
    pub fn partial(&self, i: usize) -> RatFunc {
        if self.den_pow == 0 {
            return RatFunc::poly(self.num.partial(i));
        }
        let np = self.num.partial(i);
        let dp = self.den.partial(i);
        let m = rat_int(self.den_pow as i64);
        let num = np.mul(&self.den).sub(&self.num.mul(&dp).scale(&m));
        RatFunc::new(num, self.den.clone(), self.den_pow + 1)
    }

    pub fn partial_multi(&self, alpha: &MultiIndex) -> RatFunc {
        let mut f = self.clone();
        for (i, &n) in alpha.exponents().iter().enumerate() {
            for _ in 0..n {
                f = f.partial(i);
            }
        }
        f
    }
}
