//! Parametrized manifold pieces with exact evaluation and derivatives.
//!
//! A chart maps a rational box in `R^k` into `R^d` by coordinate functions
//! that are polynomials or share one polynomial denominator. Implicit
//! integer-coefficient equations certify membership of ambient points, and a
//! per-chart sweep rule tells the enumerator how far it must search parameter
//! denominators to find every image point below a height bound.
//!
//! Built-ins: monomial (Veronese) charts `veronese:k,n`, the plane curves
//! `cn:n` given by `t -> (t, t^n)`, and unit spheres `sphere:d` under
//! stereographic projection from the north pole.

use crate::matrix::QMatrix;
use crate::mpoly::{MPoly, RatFunc};
use crate::multiindex::{indices_up_to, MultiIndex};
use crate::point::RationalPoint;
use crate::rational::{nth_root_floor, rat_int, Rational};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// How image heights relate to parameter denominators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SweepRule {
    /// The image height of a parameter with joint denominator `q` is exactly
    /// `q^n`; denominators up to `floor(T^(1/n))` suffice.
    PowerHeight { n: u32 },
    /// Stereographic sphere coordinates: the image of `a/q` has height
    /// `(q^2 + |a|^2) / g` with `g` dividing `2 q^2`, so joint denominators
    /// up to `2T` (and `q^2 + |a|^2 <= 2T q^2`) suffice.
    Stereographic,
}

/// An axis-aligned closed rational box.
pub type Box_ = Vec<(Rational, Rational)>;

pub fn unit_box(dim: usize) -> Box_ {
    (0..dim).map(|_| (rat_int(-1), rat_int(1))).collect()
}

pub fn symmetric_box(dim: usize, half_width: Rational) -> Box_ {
    (0..dim).map(|_| (-half_width.clone(), half_width.clone())).collect()
}

/// Intersect two boxes; `None` if empty on some axis.
pub fn intersect_box(a: &[(Rational, Rational)], b: &[(Rational, Rational)]) -> Option<Box_> {
    assert_eq!(a.len(), b.len());
    let mut out = Vec::with_capacity(a.len());
    for ((alo, ahi), (blo, bhi)) in a.iter().zip(b.iter()) {
        let lo = alo.clone().max(blo.clone());
        let hi = ahi.clone().min(bhi.clone());
        if lo > hi {
            return None;
        }
        out.push((lo, hi));
    }
    Some(out)
}

#[derive(Debug, Clone)]
pub struct Chart {
    spec: String,
    k: usize,
    d: usize,
    coords: Vec<RatFunc>,
    domain: Box_,
    implicit_eqs: Vec<MPoly>,
    rule: SweepRule,
    /// Image points not reached by any finite parameter (atlas completion);
    /// for spheres this is the antipode of the projection pole.
    extra_points: Vec<RationalPoint>,
    degree_bound: u32,
}

impl Chart {
    /// The monomial embedding `t -> (t^a)` over all `0 < |a| <= n`,
    /// degree-major with the linear block first.
    pub fn veronese(k: usize, n: u32) -> Chart {
        assert!(k >= 1 && n >= 1);
        let alphas = indices_up_to(k, n);
        let d = alphas.len();
        let coords: Vec<RatFunc> = alphas
            .iter()
            .map(|a| RatFunc::poly(MPoly::monomial(a, Rational::one())))
            .collect();
        // membership: graph relations x_a = prod_i x_{e_i}^{a_i} for |a| >= 2
        let pos_of = |a: &MultiIndex| alphas.iter().position(|b| b == a).unwrap();
        let mut implicit_eqs = Vec::new();
        for a in alphas.iter().filter(|a| a.degree() >= 2) {
            let lhs = MPoly::var(d, pos_of(a));
            let mut rhs = MPoly::one(d);
            for i in 0..k {
                for _ in 0..a.exponents()[i] {
                    rhs = rhs.mul(&MPoly::var(d, pos_of(&MultiIndex::unit(k, i))));
                }
            }
            implicit_eqs.push(lhs.sub(&rhs));
        }
        // quadratic binomial relations x_a x_b = x_c x_e for a+b = c+e,
        // allowing the empty index as the constant 1
        let coord_or_one = |a: &MultiIndex| -> MPoly {
            if a.degree() == 0 {
                MPoly::one(d)
            } else {
                MPoly::var(d, pos_of(a))
            }
        };
        let mut all_pairs: std::collections::BTreeMap<Vec<u32>, Vec<(MultiIndex, MultiIndex)>> =
            Default::default();
        let mut with_zero = vec![MultiIndex::zero(k)];
        with_zero.extend(alphas.iter().cloned());
        for (i, a) in with_zero.iter().enumerate() {
            for b in with_zero.iter().skip(i) {
                if a.degree() + b.degree() < 2 {
                    continue;
                }
                let sum: Vec<u32> = a
                    .exponents()
                    .iter()
                    .zip(b.exponents())
                    .map(|(x, y)| x + y)
                    .collect();
                all_pairs.entry(sum).or_default().push((a.clone(), b.clone()));
            }
        }
        for (_, reps) in all_pairs {
            for pair in reps.windows(2) {
                let (a, b) = &pair[0];
                let (c, e) = &pair[1];
                let lhs = coord_or_one(a).mul(&coord_or_one(b));
                let rhs = coord_or_one(c).mul(&coord_or_one(e));
                implicit_eqs.push(lhs.sub(&rhs));
            }
        }
        implicit_eqs.retain(|f| !f.is_zero());
        Chart {
            spec: format!("veronese:{k},{n}"),
            k,
            d,
            coords,
            domain: unit_box(k),
            implicit_eqs,
            rule: SweepRule::PowerHeight { n },
            extra_points: Vec::new(),
            degree_bound: n,
        }
    }

    /// The plane curve `t -> (t, t^n)`.
    pub fn cn(n: u32) -> Chart {
        assert!(n >= 2);
        let t = MPoly::var(1, 0);
        let mut tn = MPoly::one(1);
        for _ in 0..n {
            tn = tn.mul(&t);
        }
        let coords = vec![RatFunc::poly(t), RatFunc::poly(tn)];
        // x2 - x1^n
        let x1 = MPoly::var(2, 0);
        let x2 = MPoly::var(2, 1);
        let mut x1n = MPoly::one(2);
        for _ in 0..n {
            x1n = x1n.mul(&x1);
        }
        Chart {
            spec: format!("cn:{n}"),
            k: 1,
            d: 2,
            coords,
            domain: unit_box(1),
            implicit_eqs: vec![x2.sub(&x1n)],
            rule: SweepRule::PowerHeight { n },
            extra_points: Vec::new(),
            degree_bound: n,
        }
    }

    /// The identity chart on `R^k` (every rational point is intrinsic).
    pub fn identity(k: usize) -> Chart {
        assert!(k >= 1);
        let coords = (0..k).map(|i| RatFunc::poly(MPoly::var(k, i))).collect();
        Chart {
            spec: format!("identity:{k}"),
            k,
            d: k,
            coords,
            domain: unit_box(k),
            implicit_eqs: Vec::new(),
            rule: SweepRule::PowerHeight { n: 1 },
            extra_points: Vec::new(),
            degree_bound: 1,
        }
    }

    /// The unit sphere `S^(d-1)` under stereographic projection from the
    /// north pole: `t -> (2t, 1 - |t|^2) / (1 + |t|^2)`.
    ///
    /// The domain box is huge rather than `[-1,1]^k`: a point of height `T`
    /// can pull back to a parameter of size up to `T`, and enumeration
    /// completeness requires those parameters to be inside the domain. The
    /// antipode `(0, ..., 0, -1)` has no finite parameter and is carried as
    /// an extra point so enumeration covers all rational points.
    pub fn sphere(d: usize) -> Chart {
        assert!(d >= 2);
        let k = d - 1;
        let mut norm2 = MPoly::zero(k);
        for i in 0..k {
            let t = MPoly::var(k, i);
            norm2 = norm2.add(&t.mul(&t));
        }
        let den = MPoly::one(k).add(&norm2);
        let mut coords: Vec<RatFunc> = (0..k)
            .map(|i| RatFunc::new(MPoly::var(k, i).scale(&rat_int(2)), den.clone(), 1))
            .collect();
        coords.push(RatFunc::new(MPoly::one(k).sub(&norm2), den.clone(), 1));
        let mut sum_sq = MPoly::constant(d, rat_int(-1));
        for i in 0..d {
            let x = MPoly::var(d, i);
            sum_sq = sum_sq.add(&x.mul(&x));
        }
        let mut south = vec![BigInt::zero(); d];
        south[d - 1] = BigInt::from(-1);
        let big = rat_int(1i64 << 30);
        Chart {
            spec: format!("sphere:{d}"),
            k,
            d,
            coords,
            domain: symmetric_box(k, big),
            implicit_eqs: vec![sum_sq],
            rule: SweepRule::Stereographic,
            extra_points: vec![RationalPoint::from_raw(south, BigInt::one())],
            degree_bound: 2,
        }
    }

    /// A custom polynomial chart (used for degenerate test cases).
    pub fn from_polynomials(
        spec: &str,
        k: usize,
        coords: Vec<MPoly>,
        implicit_eqs: Vec<MPoly>,
        height_power: u32,
    ) -> Chart {
        let d = coords.len();
        let degree_bound = coords.iter().filter_map(|c| c.degree()).max().unwrap_or(1);
        Chart {
            spec: spec.to_string(),
            k,
            d,
            coords: coords.into_iter().map(RatFunc::poly).collect(),
            domain: unit_box(k),
            implicit_eqs,
            rule: SweepRule::PowerHeight { n: height_power },
            extra_points: Vec::new(),
            degree_bound,
        }
    }

    /// Parse a registry specifier: `veronese:k,n`, `cn:n`, `sphere:d`,
    /// `identity:k`.
    pub fn parse_spec(spec: &str) -> Result<Chart> {
        let err = || Error::UnknownChart(spec.to_string());
        let (name, args) = spec.split_once(':').ok_or_else(err)?;
        match name {
            "veronese" => {
                let (k, n) = args.split_once(',').ok_or_else(err)?;
                let k: usize = k.trim().parse().map_err(|_| err())?;
                let n: u32 = n.trim().parse().map_err(|_| err())?;
                if k < 1 || n < 1 {
                    return Err(err());
                }
                Ok(Chart::veronese(k, n))
            }
            "cn" => {
                let n: u32 = args.trim().parse().map_err(|_| err())?;
                if n < 2 {
                    return Err(err());
                }
                Ok(Chart::cn(n))
            }
            "sphere" => {
                let d: usize = args.trim().parse().map_err(|_| err())?;
                if d < 2 {
                    return Err(err());
                }
                Ok(Chart::sphere(d))
            }
            "identity" => {
                let k: usize = args.trim().parse().map_err(|_| err())?;
                if k < 1 {
                    return Err(err());
                }
                Ok(Chart::identity(k))
            }
            _ => Err(err()),
        }
    }

    pub fn with_domain(mut self, domain: Box_) -> Chart {
        assert_eq!(domain.len(), self.k);
        self.domain = domain;
        self
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn domain(&self) -> &Box_ {
        &self.domain
    }

    pub fn implicit_eqs(&self) -> &[MPoly] {
        &self.implicit_eqs
    }

    pub fn rule(&self) -> &SweepRule {
        &self.rule
    }

    pub fn extra_points(&self) -> &[RationalPoint] {
        &self.extra_points
    }

    pub fn coords(&self) -> &[RatFunc] {
        &self.coords
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn in_domain(&self, t: &[Rational]) -> bool {
        assert_eq!(t.len(), self.k);
        t.iter()
            .zip(self.domain.iter())
            .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    /// Exact image of a parameter: reduced, with height.
    pub fn evaluate(&self, t: &[Rational]) -> Result<RationalPoint> {
        if !self.in_domain(t) {
            return Err(Error::OutsideDomain(format!(
                "{:?} for {}",
                t.iter().map(crate::rational::rational_str).collect::<Vec<_>>(),
                self.spec
            )));
        }
        let mut vals = Vec::with_capacity(self.d);
        for c in &self.coords {
            vals.push(c.eval(t)?);
        }
        let p = RationalPoint::reduce(&vals);
        debug_assert!(self.contains_point(&p));
        Ok(p)
    }

    /// Membership certificate: all implicit equations vanish at the point.
    pub fn contains_point(&self, p: &RationalPoint) -> bool {
        assert_eq!(p.dim(), self.d);
        self.implicit_eqs
            .iter()
            .all(|f| f.vanishes_at_fraction(p.numerators(), p.height()))
    }

    /// The coordinate derivative map `d^alpha` of the chart.
    pub fn partial(&self, alpha: &MultiIndex) -> DerivativeMap {
        assert_eq!(alpha.len(), self.k);
        DerivativeMap {
            funcs: self.coords.iter().map(|c| c.partial_multi(alpha)).collect(),
        }
    }

    /// Rows `d^alpha(coords)(t)` for all `0 < |alpha| <= j`, plus the rank.
    pub fn tangent_data(&self, t: &[Rational], j: u32) -> Result<TangentData> {
        if !self.in_domain(t) {
            return Err(Error::OutsideDomain(self.spec.clone()));
        }
        let mut rows = Vec::new();
        let mut alphas = Vec::new();
        for alpha in indices_up_to(self.k, j) {
            let row: Result<Vec<Rational>> = self
                .coords
                .iter()
                .map(|c| c.partial_multi(&alpha).eval(t))
                .collect();
            rows.push(row?);
            alphas.push(alpha);
        }
        let rank = QMatrix::from_rows(rows.clone()).exact_rank();
        Ok(TangentData { order: j, alphas, rows, rank })
    }

    /// Least `j <= j_max` whose order-`j` tangent space has full rank `d`.
    pub fn nondegeneracy_order(&self, t: &[Rational], j_max: u32) -> Result<Nondegeneracy> {
        let mut rank = 0;
        for j in 1..=j_max {
            rank = self.tangent_data(t, j)?.rank;
            if rank == self.d {
                return Ok(Nondegeneracy::Reached { order: j });
            }
        }
        Ok(Nondegeneracy::NotReached { rank })
    }

    /// Parameter joint-denominator bound sufficient to reach every image
    /// point of height at most `t_max`.
    pub fn param_height_bound(&self, t_max: &BigInt) -> BigInt {
        assert!(!t_max.is_negative());
        match &self.rule {
            SweepRule::PowerHeight { n } => nth_root_floor(t_max, *n),
            SweepRule::Stereographic => t_max * 2,
        }
    }

    /// Pull an ambient affine functional `w . (1, x)` back through the chart:
    /// the returned polynomial in parameter space has the same zero set as
    /// the preimage of the hyperplane `{w . (1, x) = 0}` (the shared
    /// coordinate denominator is positive on the domain).
    pub fn pullback_functional(&self, w: &[BigInt]) -> MPoly {
        assert_eq!(w.len(), self.d + 1);
        let den = &self.coords[0].den;
        let den_pow = self.coords[0].den_pow;
        debug_assert!(self
            .coords
            .iter()
            .all(|c| c.den == *den && c.den_pow == den_pow));
        let mut denp = MPoly::one(self.k);
        for _ in 0..den_pow {
            denp = denp.mul(den);
        }
        let mut f = denp.scale(&Rational::from_integer(w[0].clone()));
        for (i, c) in self.coords.iter().enumerate() {
            f = f.add(&c.num.scale(&Rational::from_integer(w[i + 1].clone())));
        }
        f
    }
}

/// A `d^alpha` derivative of a chart's coordinate functions.
pub struct DerivativeMap {
    pub funcs: Vec<RatFunc>,
}

impl DerivativeMap {
    pub fn eval(&self, t: &[Rational]) -> Result<Vec<Rational>> {
        self.funcs.iter().map(|f| f.eval(t)).collect()
    }
}

/// Span data of the order-`j` tangent space at a parameter.
pub struct TangentData {
    pub order: u32,
    pub alphas: Vec<MultiIndex>,
    pub rows: Vec<Vec<Rational>>,
    pub rank: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nondegeneracy {
    Reached { order: u32 },
    NotReached { rank: usize },
}
