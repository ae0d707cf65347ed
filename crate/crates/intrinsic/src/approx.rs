//! Intrinsic approximation measurements: best-approximation records,
//! exponent estimates, badly/very-well approximable verdicts at scale, and
//! uniform-constant (Dirichlet function) tests.
//!
//! Distances from algebraic targets are certified: the target parameter is
//! an isolating-interval algebraic number, its chart image is an exact
//! rational box, and every staircase comparison either resolves with
//! disjoint intervals or triggers refinement. Floats only ever summarize
//! (regression slopes, reported constants); every record underneath is an
//! exact enclosure.

use crate::algebraic::{approximation_candidates, AlgebraicNumber, QuadraticSurd};
use crate::chart::{intersect_box, Box_, Chart, SweepRule};
use crate::enumerate::{enumerate_rationals, EnumeratedPoint};
use crate::point::RationalPoint;
use crate::rational::{
    box_point_dist, pow_rational_enclosure, rat_int, to_f64, QInterval, Rational,
};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A point of the manifold to approximate, given in parameter space.
#[derive(Debug, Clone)]
pub enum TargetPoint {
    RationalParam(Vec<Rational>),
    /// One-dimensional algebraic parameter (k = 1 charts).
    AlgebraicParam(AlgebraicNumber),
}

impl TargetPoint {
    pub fn param_interval(&self) -> Vec<QInterval> {
        match self {
            TargetPoint::RationalParam(t) => {
                t.iter().map(|v| QInterval::point(v.clone())).collect()
            }
            TargetPoint::AlgebraicParam(a) => vec![a.interval().clone()],
        }
    }

    pub fn describe(&self) -> String {
        match self {
            TargetPoint::RationalParam(t) => format!(
                "rational:{}",
                t.iter().map(crate::rational::rational_str).collect::<Vec<_>>().join(",")
            ),
            TargetPoint::AlgebraicParam(a) => {
                let cs: Vec<String> = a
                    .poly()
                    .coeffs()
                    .iter()
                    .map(crate::rational::rational_str)
                    .collect();
                format!(
                    "algebraic:[{}] in [{}, {}]",
                    cs.join(","),
                    crate::rational::rational_str(&a.interval().lo),
                    crate::rational::rational_str(&a.interval().hi),
                )
            }
        }
    }
}

/// One best-approximation event: strictly smaller distance than every
/// earlier (lower-height) record.
#[derive(Debug, Clone)]
pub struct ApproximationRecord {
    pub height: BigInt,
    /// Exact for rational targets (`lo == hi`), a certified enclosure
    /// otherwise.
    pub distance: QInterval,
    pub witness: RationalPoint,
    pub param: Option<Vec<Rational>>,
}

#[derive(Debug, Clone)]
pub struct RecordsConfig {
    pub t_max: BigInt,
    /// Parameter half-width of the enumeration window around the target.
    pub window: Option<Rational>,
    pub budget: u128,
    /// Initial target-enclosure width `2^-bits`.
    pub enclosure_bits: u64,
}

impl RecordsConfig {
    pub fn new(t_max: u64) -> RecordsConfig {
        RecordsConfig {
            t_max: BigInt::from(t_max),
            window: None,
            budget: 1 << 34,
            enclosure_bits: 128,
        }
    }
}

const MAX_ENCLOSURE_BITS: u64 = 1 << 12;
/// Refinement level at which exact tie detection kicks in.
const TIE_CHECK_BITS: u64 = 512;

/// Target-image evaluation context with on-demand refinement.
struct TargetCtx<'a> {
    chart: &'a Chart,
    exact_image: Option<Vec<Rational>>,
    alg: Option<AlgebraicNumber>,
    bits: u64,
    image_box: Vec<QInterval>,
}

impl<'a> TargetCtx<'a> {
    fn new(chart: &'a Chart, target: &TargetPoint, bits: u64) -> Result<TargetCtx<'a>> {
        match target {
            TargetPoint::RationalParam(t) => {
                let img = chart.evaluate(t)?;
                let coords = img.coords();
                let image_box = coords.iter().map(|c| QInterval::point(c.clone())).collect();
                Ok(TargetCtx { chart, exact_image: Some(coords), alg: None, bits, image_box })
            }
            TargetPoint::AlgebraicParam(a) => {
                if chart.k() != 1 {
                    return Err(Error::Unsupported(
                        "algebraic targets are one-dimensional".into(),
                    ));
                }
                let mut ctx = TargetCtx {
                    chart,
                    exact_image: None,
                    alg: Some(a.clone()),
                    bits,
                    image_box: Vec::new(),
                };
                ctx.recompute_image()?;
                Ok(ctx)
            }
        }
    }

    fn recompute_image(&mut self) -> Result<()> {
        let alg = self.alg.as_mut().unwrap();
        let width = Rational::new(BigInt::one(), BigInt::one() << self.bits);
        alg.refine(&width);
        let iv = alg.interval().clone();
        let mut coords = Vec::with_capacity(self.chart.d());
        for c in self.chart.coords() {
            coords.push(c.eval_interval(std::slice::from_ref(&iv))?);
        }
        self.image_box = coords;
        Ok(())
    }

    /// Halve the enclosure width; false once the precision floor is hit.
    fn refine(&mut self) -> Result<bool> {
        if self.exact_image.is_some() || self.bits >= MAX_ENCLOSURE_BITS {
            return Ok(false);
        }
        self.bits = (self.bits * 2).min(MAX_ENCLOSURE_BITS);
        self.recompute_image()?;
        Ok(true)
    }

    fn distance_to(&self, p: &RationalPoint) -> QInterval {
        box_point_dist(&self.image_box, &p.coords())
    }

    fn is_exact(&self) -> bool {
        self.exact_image.is_some()
    }
}

/// Exact tie test: the max-norm distances from the algebraic target to `a`
/// and `b` can only be equal if the target is a root of one of the sign
/// combinations `s (c_i - a_i) - s' (c_j - b_j)`. Those are polynomials
/// (after clearing the shared coordinate denominator), so vanishing at the
/// target is decided by a gcd with the minimal polynomial plus a root count
/// in the isolating interval.
fn distances_can_tie(ctx: &TargetCtx, a: &RationalPoint, b: &RationalPoint) -> Result<bool> {
    let alg = ctx.alg.as_ref().expect("tie check is for algebraic targets");
    let minpoly = alg.poly();
    let iv = alg.interval();
    let coords = ctx.chart.coords();
    let den_pow = coords[0].den_pow;
    let mut denp = crate::mpoly::MPoly::one(1);
    for _ in 0..den_pow {
        denp = denp.mul(&coords[0].den);
    }
    for (i, ci) in coords.iter().enumerate() {
        for (j, cj) in coords.iter().enumerate() {
            let fi = ci.num.sub(&denp.scale(&a.coordinate(i)));
            let fj = cj.num.sub(&denp.scale(&b.coordinate(j)));
            for (s, sp) in [(1i64, 1i64), (1, -1)] {
                let g = fi.scale(&rat_int(s)).sub(&fj.scale(&rat_int(sp)));
                if g.is_zero() {
                    return Ok(true);
                }
                let gu = g.to_unipoly()?;
                let h = minpoly.gcd(&gu);
                if h.degree().map_or(false, |d| d >= 1) {
                    if let Ok(chain) = crate::unipoly::SturmChain::new(&h) {
                        if chain.has_root_closed(&iv.lo, &iv.hi) {
                            return Ok(true);
                        }
                    }
                }
            }
        }
    }
    Ok(false)
}

/// Compare two distance enclosures, refining the shared target enclosure
/// until they separate. Exact ties resolve as "not less" (a tie is never a
/// strict improvement, and either witness carries the same distance).
fn certified_less(
    ctx: &mut TargetCtx,
    a: &RationalPoint,
    b: &RationalPoint,
) -> Result<bool> {
    let mut tie_checked = false;
    loop {
        let da = ctx.distance_to(a);
        let db = ctx.distance_to(b);
        if da.is_point() && db.is_point() {
            return Ok(da.lo < db.lo);
        }
        match da.certified_lt(&db) {
            Some(v) => return Ok(v),
            None => {
                if !tie_checked && ctx.bits >= TIE_CHECK_BITS {
                    tie_checked = true;
                    if distances_can_tie(ctx, a, b)? {
                        return Ok(false);
                    }
                }
                if !ctx.refine()? {
                    return Err(Error::PrecisionExhausted(format!(
                        "cannot separate distances of {} and {}",
                        a.to_record(),
                        b.to_record()
                    )));
                }
            }
        }
    }
}

/// Absolute slop covering all rounding error in the float prefilter; the
/// exact coordinates in play are bounded by small window powers, so the
/// true float error is below `1e-13`.
const PREFILTER_SLOP: f64 = 1e-9;

/// Build the strictly improving staircase from a point list.
///
/// A float prefilter discards candidates whose distance exceeds the current
/// best by far more than any possible rounding error; everything that
/// survives is compared with certified exact enclosures.
fn staircase(
    ctx: &mut TargetCtx,
    mut points: Vec<EnumeratedPoint>,
) -> Result<Vec<ApproximationRecord>> {
    points.sort_by(|a, b| a.point.cmp(&b.point));
    points.dedup_by(|a, b| a.point == b.point);
    let target_f64: Vec<f64> = ctx.image_box.iter().map(|iv| to_f64(&iv.midpoint())).collect();
    let fdist = |p: &RationalPoint| -> f64 {
        let mut m: f64 = 0.0;
        for (i, tf) in target_f64.iter().enumerate() {
            let c = to_f64(&p.coordinate(i));
            m = m.max((tf - c).abs());
        }
        m
    };
    let mut records: Vec<ApproximationRecord> = Vec::new();
    let mut best: Option<RationalPoint> = None;
    let mut best_f64 = f64::MAX;
    let mut i = 0;
    while i < points.len() {
        // one height group at a time
        let h = points[i].point.height().clone();
        let mut j = i;
        let mut survivors: Vec<usize> = Vec::new();
        while j < points.len() && points[j].point.height() == &h {
            if best.is_none() || fdist(&points[j].point) <= best_f64 + PREFILTER_SLOP {
                survivors.push(j);
            }
            j += 1;
        }
        if !survivors.is_empty() {
            let mut group_best = survivors[0];
            for &s in &survivors[1..] {
                if certified_less(ctx, &points[s].point, &points[group_best].point)? {
                    group_best = s;
                }
            }
            let cand = &points[group_best];
            let improves = match &best {
                None => true,
                Some(b) => certified_less(ctx, &cand.point, b)?,
            };
            if improves {
                // zero distance (rational target hitting itself) is the
                // terminal record
                let dist = ctx.distance_to(&cand.point);
                best_f64 = to_f64(&dist.hi);
                records.push(ApproximationRecord {
                    height: h.clone(),
                    distance: dist,
                    witness: cand.point.clone(),
                    param: cand.param.clone(),
                });
                best = Some(cand.point.clone());
                if ctx.is_exact() {
                    if let Some(r) = records.last() {
                        if r.distance.lo.is_zero() && r.distance.is_point() {
                            break; // exact hit, nothing below zero
                        }
                    }
                }
            }
        }
        i = j;
    }
    Ok(records)
}

fn default_window(chart: &Chart) -> Rational {
    match chart.rule() {
        SweepRule::PowerHeight { .. } => rat_int(1),
        // circle points with far parameters sit near the antipode, at
        // max-norm distance >= 4/5 from any image of [-1, 1]; a window of 3
        // keeps every potential record inside
        SweepRule::Stereographic => rat_int(3),
    }
}

/// Enumeration window around a target in parameter space.
fn target_window(chart: &Chart, target: &TargetPoint, half_width: &Rational) -> Result<Box_> {
    let iv = target.param_interval();
    if iv.len() != chart.k() {
        return Err(Error::Unsupported("target dimension mismatch".into()));
    }
    let raw: Box_ = iv
        .iter()
        .map(|w| (&w.lo - half_width, &w.hi + half_width))
        .collect();
    intersect_box(&raw, chart.domain())
        .ok_or_else(|| Error::OutsideDomain("target window misses the chart domain".into()))
}

/// Points eligible for records: enumeration window around the target plus
/// the chart's atlas-completion points.
fn record_points(
    chart: &Chart,
    target: &TargetPoint,
    cfg: &RecordsConfig,
) -> Result<Vec<EnumeratedPoint>> {
    let half = cfg.window.clone().unwrap_or_else(|| default_window(chart));
    let window = target_window(chart, target, &half)?;
    let params = crate::enumerate::param_candidates(chart, &cfg.t_max, &window, cfg.budget)?;
    let mut out = Vec::new();
    for t in params {
        match chart.evaluate(&t) {
            Ok(p) => {
                if p.height() <= &cfg.t_max {
                    out.push(EnumeratedPoint { point: p, param: Some(t) });
                }
            }
            Err(Error::PoleHit(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    for p in chart.extra_points() {
        if p.height() <= &cfg.t_max {
            out.push(EnumeratedPoint { point: p.clone(), param: None });
        }
    }
    Ok(out)
}

/// Best-approximation staircase of the target up to height `t_max`.
pub fn best_approximations(
    chart: &Chart,
    target: &TargetPoint,
    cfg: &RecordsConfig,
) -> Result<Vec<ApproximationRecord>> {
    let points = record_points(chart, target, cfg)?;
    let mut ctx = TargetCtx::new(chart, target, cfg.enclosure_bits)?;
    staircase(&mut ctx, points)
}

/// Independent staircase for one-dimensional power charts from the exact
/// continued fraction of a quadratic target: candidates are the convergents
/// and intermediate fractions, which contain every best approximation.
pub fn oracle_records(
    chart: &Chart,
    target: &AlgebraicNumber,
    cfg: &RecordsConfig,
) -> Result<Vec<ApproximationRecord>> {
    if chart.k() != 1 {
        return Err(Error::Unsupported("oracle needs a one-dimensional chart".into()));
    }
    let SweepRule::PowerHeight { .. } = chart.rule() else {
        return Err(Error::Unsupported("oracle needs a power-height chart".into()));
    };
    let max_den = chart.param_height_bound(&cfg.t_max);
    let mut surd = QuadraticSurd::from_quadratic(target.poly(), target.interval())?;
    // denominators grow at least like Fibonacci numbers; generate terms a
    // little past the bound
    let needed = (max_den.bits() as usize) * 2 + 8;
    let terms = surd.cf_terms(needed);
    let cands = approximation_candidates(&terms, &max_den);
    let mut points = Vec::new();
    for t in cands {
        if !chart.in_domain(std::slice::from_ref(&t)) {
            continue;
        }
        let p = chart.evaluate(std::slice::from_ref(&t))?;
        if p.height() <= &cfg.t_max {
            points.push(EnumeratedPoint { point: p, param: Some(vec![t]) });
        }
    }
    let tp = TargetPoint::AlgebraicParam(target.clone());
    let mut ctx = TargetCtx::new(chart, &tp, cfg.enclosure_bits)?;
    staircase(&mut ctx, points)
}

/// Log-log regression summary of a record list.
#[derive(Debug, Clone)]
pub struct ExponentEstimate {
    /// Least-squares slope of `log(1/distance)` against `log(height)`.
    pub slope: f64,
    /// Extremes of `log(1/distance) / log(height)` over the tail window.
    pub tail_inf: f64,
    pub tail_sup: f64,
    pub c_reference: Option<Rational>,
}

fn usable(records: &[ApproximationRecord]) -> Vec<(f64, f64)> {
    records
        .iter()
        .filter(|r| r.distance.lo.is_positive())
        .map(|r| {
            let h = r.height.to_f64().unwrap_or(f64::MAX);
            let d = to_f64(&r.distance.midpoint());
            (h.ln(), -d.ln())
        })
        .collect()
}

/// Records in the last `fraction` of the log-height range.
pub fn tail_records(records: &[ApproximationRecord], fraction: f64) -> Vec<ApproximationRecord> {
    if records.is_empty() {
        return Vec::new();
    }
    let logs: Vec<f64> = records
        .iter()
        .map(|r| r.height.to_f64().unwrap_or(f64::MAX).ln())
        .collect();
    let max = logs.iter().cloned().fold(f64::MIN, f64::max);
    let min = logs.iter().cloned().fold(f64::MAX, f64::min);
    let cut = max - fraction * (max - min);
    records
        .iter()
        .zip(logs.iter())
        .filter(|(_, l)| **l >= cut)
        .map(|(r, _)| r.clone())
        .collect()
}

pub fn exponent_estimate(
    records: &[ApproximationRecord],
    tail_fraction: f64,
    c_reference: Option<Rational>,
) -> Result<ExponentEstimate> {
    let pts = usable(records);
    if pts.len() < 2 {
        return Err(Error::InsufficientData);
    }
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for (x, y) in &pts {
        cov += (x - mean_x) * (y - mean_y);
        var += (x - mean_x) * (x - mean_x);
    }
    if var == 0.0 {
        return Err(Error::InsufficientData);
    }
    let slope = cov / var;
    let tail = tail_records(records, tail_fraction);
    let ratios: Vec<f64> = usable(&tail)
        .iter()
        .filter(|(x, _)| *x > 0.0)
        .map(|(x, y)| y / x)
        .collect();
    let (tail_inf, tail_sup) = if ratios.is_empty() {
        (slope, slope)
    } else {
        (
            ratios.iter().cloned().fold(f64::MAX, f64::min),
            ratios.iter().cloned().fold(f64::MIN, f64::max),
        )
    };
    Ok(ExponentEstimate { slope, tail_inf, tail_sup, c_reference })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaVerdict {
    /// Distance 0 occurred: the target is itself an intrinsic rational.
    NotBadlyApproximable,
    /// Infimum certified positive and stable across the tail.
    BadlyApproximableAtScale,
    /// Infimum positive but decaying: no verdict at this scale.
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct BaReport {
    /// Enclosure of `inf dist * H^c` over the records.
    pub infimum: QInterval,
    pub tail_infimum: QInterval,
    pub trend_ratio: f64,
    pub trend_threshold: f64,
    pub verdict: BaVerdict,
}

fn interval_min(a: QInterval, b: &QInterval) -> QInterval {
    QInterval::new(a.lo.min(b.lo.clone()), a.hi.min(b.hi.clone()))
}

/// Running infimum of `distance * height^c` with a trend check.
pub fn ba_test(records: &[ApproximationRecord], c: &Rational, trend_threshold: f64) -> Result<BaReport> {
    if records.is_empty() {
        return Err(Error::InsufficientData);
    }
    let scaled = |r: &ApproximationRecord| -> QInterval {
        let hc = pow_rational_enclosure(&r.height, c, 64);
        r.distance.mul(&hc)
    };
    let mut inf: Option<QInterval> = None;
    for r in records {
        if r.distance.is_point() && r.distance.lo.is_zero() {
            return Ok(BaReport {
                infimum: QInterval::point(Rational::zero()),
                tail_infimum: QInterval::point(Rational::zero()),
                trend_ratio: 0.0,
                trend_threshold,
                verdict: BaVerdict::NotBadlyApproximable,
            });
        }
        let v = scaled(r);
        inf = Some(match inf {
            None => v,
            Some(acc) => interval_min(acc, &v),
        });
    }
    let infimum = inf.unwrap();
    let tail = tail_records(records, 0.5);
    let mut tinf: Option<QInterval> = None;
    for r in &tail {
        let v = scaled(r);
        tinf = Some(match tinf {
            None => v,
            Some(acc) => interval_min(acc, &v),
        });
    }
    let tail_infimum = tinf.unwrap_or_else(|| infimum.clone());
    let trend_ratio = to_f64(&tail_infimum.midpoint()) / to_f64(&infimum.midpoint()).max(f64::MIN_POSITIVE);
    let verdict = if infimum.lo.is_positive() && trend_ratio >= trend_threshold {
        BaVerdict::BadlyApproximableAtScale
    } else {
        BaVerdict::Inconclusive
    };
    Ok(BaReport { infimum, tail_infimum, trend_ratio, trend_threshold, verdict })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VwaVerdict {
    /// Rational target: distance 0 at finite height.
    Degenerate,
    /// Largest grid epsilon with enough tail hits.
    SupportedEpsilon(Rational),
    NoSupport,
}

#[derive(Debug, Clone)]
pub struct VwaReport {
    pub verdict: VwaVerdict,
    /// `(epsilon, tail hits of dist <= H^-(c+eps))` per grid value.
    pub counts: Vec<(Rational, usize)>,
    pub tail_len: usize,
    pub required: usize,
}

/// Grid search for exponents beating `c` infinitely-often-at-scale.
pub fn vwa_test(
    records: &[ApproximationRecord],
    c: &Rational,
    grid_steps: u32,
    required: usize,
) -> Result<VwaReport> {
    if records.is_empty() {
        return Err(Error::InsufficientData);
    }
    if records
        .iter()
        .any(|r| r.distance.is_point() && r.distance.lo.is_zero())
    {
        return Ok(VwaReport {
            verdict: VwaVerdict::Degenerate,
            counts: Vec::new(),
            tail_len: 0,
            required,
        });
    }
    let tail = tail_records(records, 0.25);
    let mut counts = Vec::new();
    let mut supported: Option<Rational> = None;
    for i in 1..=grid_steps {
        let eps = Rational::new(BigInt::from(i), BigInt::from(16));
        let exp = c + &eps;
        let mut hits = 0;
        for r in &tail {
            // dist <= H^-(c+eps)  <=>  dist * H^(c+eps) <= 1, certified
            let hc = pow_rational_enclosure(&r.height, &exp, 64);
            let v = r.distance.mul(&hc);
            if v.hi <= Rational::one() {
                hits += 1;
            }
        }
        if hits >= required {
            supported = Some(eps.clone());
        }
        counts.push((eps, hits));
    }
    let verdict = match supported {
        Some(e) => VwaVerdict::SupportedEpsilon(e),
        None => VwaVerdict::NoSupport,
    };
    Ok(VwaReport { verdict, counts, tail_len: tail.len(), required })
}

/// Per-dyadic-level uniform constants `sup_targets md(2^j) * 2^(j c)`.
#[derive(Debug, Clone)]
pub struct LevelConstant {
    pub level: u32,
    pub constant: f64,
    pub witness_target: usize,
    pub witness: Option<RationalPoint>,
}

#[derive(Debug, Clone)]
pub struct DirichletReport {
    pub levels: Vec<LevelConstant>,
    pub sup_constant: f64,
    pub sup_level: u32,
    pub sup_target: usize,
}

/// Uniform-constant test for `psi_c`: the double supremum over targets and
/// dyadic height levels of (min distance at height <= h) * h^c.
pub fn dirichlet_test(
    chart: &Chart,
    targets: &[TargetPoint],
    c: &Rational,
    cfg: &RecordsConfig,
) -> Result<DirichletReport> {
    if targets.is_empty() {
        return Err(Error::InsufficientData);
    }
    let all_records = records_for_targets(chart, targets, cfg)?;
    let max_level = (cfg.t_max.bits() as u32).saturating_sub(1);
    let mut levels = Vec::new();
    let mut sup = (f64::MIN, 0u32, 0usize);
    for j in 0..=max_level {
        let h = BigInt::one() << j;
        let hc = to_f64(&pow_rational_enclosure(&h, c, 64).midpoint());
        let mut level_best: Option<(f64, usize, RationalPoint)> = None;
        for (ti, recs) in all_records.iter().enumerate() {
            // min distance at height <= 2^j is the last record at or below
            let att = recs.iter().take_while(|r| r.height <= h).last();
            let Some(r) = att else { continue };
            let v = to_f64(&r.distance.midpoint()) * hc;
            if level_best.as_ref().map_or(true, |(b, _, _)| v > *b) {
                level_best = Some((v, ti, r.witness.clone()));
            }
        }
        if let Some((v, ti, w)) = level_best {
            if v > sup.0 {
                sup = (v, j, ti);
            }
            levels.push(LevelConstant {
                level: j,
                constant: v,
                witness_target: ti,
                witness: Some(w),
            });
        }
    }
    Ok(DirichletReport {
        levels,
        sup_constant: sup.0,
        sup_level: sup.1,
        sup_target: sup.2,
    })
}

/// Seeded quadratic irrational targets inside `(lo, hi)`: guaranteed badly
/// approximable parameters, the default experiment population.
pub fn seeded_quadratic_targets(
    count: usize,
    seed: u64,
    lo: &Rational,
    hi: &Rational,
) -> Vec<TargetPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = rng.gen_range(1..=8i64);
        let b = rng.gen_range(-8..=8i64);
        let c = rng.gen_range(-8..=8i64);
        let disc = b * b - 4 * a * c;
        if disc <= 0 {
            continue;
        }
        let s = (disc as f64).sqrt() as i64;
        if s * s == disc || (s + 1) * (s + 1) == disc {
            continue;
        }
        let poly = crate::unipoly::UniPoly::from_i64(&[c, b, a]);
        let Ok(roots) = crate::unipoly::isolate_roots(&poly, lo, hi) else { continue };
        for iv in roots {
            if iv.is_point() {
                continue;
            }
            if let Ok(alg) = AlgebraicNumber::new(&poly, iv.lo, iv.hi) {
                out.push(TargetPoint::AlgebraicParam(alg));
                if out.len() == count {
                    break;
                }
            }
        }
    }
    out
}

/// Enumeration-based records for every target. For one-dimensional charts
/// the point sweep runs once over the hull of all target windows and each
/// target filters its slice, which is what makes hundred-target runs cheap.
pub fn records_for_targets(
    chart: &Chart,
    targets: &[TargetPoint],
    cfg: &RecordsConfig,
) -> Result<Vec<Vec<ApproximationRecord>>> {
    if chart.k() != 1 || targets.len() <= 1 {
        return targets.iter().map(|t| best_approximations(chart, t, cfg)).collect();
    }
    let half = cfg.window.clone().unwrap_or_else(|| default_window(chart));
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for t in targets {
        let iv = &t.param_interval()[0];
        let wlo = &iv.lo - &half;
        let whi = &iv.hi + &half;
        lo = Some(match lo {
            None => wlo,
            Some(v) => v.min(wlo),
        });
        hi = Some(match hi {
            None => whi,
            Some(v) => v.max(whi),
        });
    }
    let hull = vec![(lo.unwrap(), hi.unwrap())];
    let Some(window) = intersect_box(&hull, chart.domain()) else {
        return Err(Error::OutsideDomain("target hull misses the chart domain".into()));
    };
    let params = crate::enumerate::param_candidates(chart, &cfg.t_max, &window, cfg.budget)?;
    let mut shared: Vec<EnumeratedPoint> = Vec::new();
    for t in params {
        match chart.evaluate(&t) {
            Ok(p) => {
                if p.height() <= &cfg.t_max {
                    shared.push(EnumeratedPoint { point: p, param: Some(t) });
                }
            }
            Err(Error::PoleHit(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let extras: Vec<EnumeratedPoint> = chart
        .extra_points()
        .iter()
        .filter(|p| p.height() <= &cfg.t_max)
        .map(|p| EnumeratedPoint { point: p.clone(), param: None })
        .collect();
    let mut out = Vec::with_capacity(targets.len());
    for t in targets {
        let iv = &t.param_interval()[0];
        let wlo = &iv.lo - &half;
        let whi = &iv.hi + &half;
        let mut pts: Vec<EnumeratedPoint> = shared
            .iter()
            .filter(|e| {
                e.param
                    .as_ref()
                    .map_or(false, |p| p[0] >= wlo && p[0] <= whi)
            })
            .cloned()
            .collect();
        pts.extend(extras.iter().cloned());
        let mut ctx = TargetCtx::new(chart, t, cfg.enclosure_bits)?;
        out.push(staircase(&mut ctx, pts)?);
    }
    Ok(out)
}

/// Full-window enumeration helper for reports.
pub fn enumerate_window(
    chart: &Chart,
    t_max: &BigInt,
    ambient_box: &Box_,
    budget: u128,
) -> Result<Vec<EnumeratedPoint>> {
    enumerate_rationals(chart, t_max, ambient_box, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::golden_ratio;
    use crate::chart::symmetric_box;
    use crate::rational::rat;

    #[test]
    fn rational_target_terminates_with_exact_hit() {
        // target parameter 1/3 on the parabola: (1/3, 1/9) has height 9
        let ch = Chart::cn(2);
        let cfg = RecordsConfig::new(100);
        let target = TargetPoint::RationalParam(vec![rat(1, 3)]);
        let recs = best_approximations(&ch, &target, &cfg).unwrap();
        let last = recs.last().unwrap();
        assert_eq!(last.height, BigInt::from(9));
        assert!(last.distance.is_point() && last.distance.lo.is_zero());
        // staircase is strictly improving in distance and height
        for w in recs.windows(2) {
            assert!(w[0].height < w[1].height);
            assert!(w[1].distance.hi < w[0].distance.lo || w[1].distance.lo.is_zero());
        }
    }

    #[test]
    fn phi_records_match_oracle_on_parabola() {
        let ch = Chart::cn(2).with_domain(symmetric_box(1, rat_int(4)));
        let mut cfg = RecordsConfig::new(10_000);
        cfg.window = Some(rat_int(1));
        let phi = golden_ratio();
        let target = TargetPoint::AlgebraicParam(phi.clone());
        let enum_recs = best_approximations(&ch, &target, &cfg).unwrap();
        let oracle = oracle_records(&ch, &phi, &cfg).unwrap();
        assert_eq!(enum_recs.len(), oracle.len());
        for (a, b) in enum_recs.iter().zip(oracle.iter()) {
            assert_eq!(a.height, b.height);
            assert_eq!(a.witness, b.witness);
        }
        // witnesses are the images of convergents: heights are squares of
        // Fibonacci denominators
        let hs: Vec<u64> = enum_recs.iter().map(|r| r.height.to_u64().unwrap()).collect();
        assert!(hs.contains(&(5 * 5)));
        assert!(hs.contains(&(55 * 55)));
    }

    #[test]
    fn exponent_estimate_exact_power_law() {
        // synthetic records: distance = height^-c exactly
        for (num, den) in [(1i64, 2i64), (1, 1), (5, 6)] {
            let c = rat(num, den);
            let mut records = Vec::new();
            for m in 1..=12u32 {
                let h = BigInt::one() << (m * den as u32);
                let dist = Rational::new(BigInt::one(), BigInt::one() << (m * num as u32));
                records.push(ApproximationRecord {
                    height: h,
                    distance: QInterval::point(dist),
                    witness: RationalPoint::reduce(&[rat_int(0)]),
                    param: None,
                });
            }
            let est = exponent_estimate(&records, 0.5, Some(c.clone())).unwrap();
            let c_f = to_f64(&c);
            assert!((est.slope - c_f).abs() < 1e-9, "c = {c}: slope {}", est.slope);
        }
    }

    #[test]
    fn exponent_requires_two_records() {
        let one = vec![ApproximationRecord {
            height: BigInt::from(2),
            distance: QInterval::point(rat(1, 3)),
            witness: RationalPoint::reduce(&[rat_int(0)]),
            param: None,
        }];
        assert!(matches!(exponent_estimate(&one, 0.5, None), Err(Error::InsufficientData)));
    }

    #[test]
    fn ba_test_on_phi() {
        let ch = Chart::cn(2).with_domain(symmetric_box(1, rat_int(4)));
        let mut cfg = RecordsConfig::new(10_000);
        cfg.window = Some(rat_int(1));
        let target = TargetPoint::AlgebraicParam(golden_ratio());
        let recs = best_approximations(&ch, &target, &cfg).unwrap();
        let rep = ba_test(&recs, &rat_int(1), 0.5).unwrap();
        assert!(rep.infimum.lo.is_positive());
        assert_eq!(rep.verdict, BaVerdict::BadlyApproximableAtScale);
        // known band: q^2 |phi - p/q| -> 1/sqrt5, second coordinate inflates
        // by |phi + p/q| ~ 2 phi; ballpark 1.447
        let mid = to_f64(&rep.infimum.midpoint());
        assert!(mid > 0.2 && mid < 3.0, "infimum {mid}");
    }

    #[test]
    fn ba_rational_target_is_degenerate() {
        let ch = Chart::cn(2);
        let cfg = RecordsConfig::new(100);
        let target = TargetPoint::RationalParam(vec![rat(1, 3)]);
        let recs = best_approximations(&ch, &target, &cfg).unwrap();
        let rep = ba_test(&recs, &rat_int(1), 0.5).unwrap();
        assert_eq!(rep.verdict, BaVerdict::NotBadlyApproximable);
        let vwa = vwa_test(&recs, &rat_int(1), 16, 3).unwrap();
        assert_eq!(vwa.verdict, VwaVerdict::Degenerate);
    }

    #[test]
    fn vwa_liouville_style_records() {
        // synthetic staircase mimicking truncations of sum 10^-j!: on the
        // parabola the height of the q = 10^(m!) truncation is q^2 and the
        // distance is about 10^-(m+1)!
        let mut records = Vec::new();
        for m in 1..=4u32 {
            let fact = (1..=m).product::<u32>();
            let next_fact = fact * (m + 1);
            let q = BigInt::from(10u32).pow(fact);
            let h = &q * &q;
            let dist = Rational::new(BigInt::one(), BigInt::from(10u32).pow(next_fact));
            records.push(ApproximationRecord {
                height: h,
                distance: QInterval::point(dist),
                witness: RationalPoint::reduce(&[rat_int(0)]),
                param: None,
            });
        }
        let rep = vwa_test(&records, &rat_int(1), 16, 1).unwrap();
        match rep.verdict {
            VwaVerdict::SupportedEpsilon(e) => assert!(e >= rat(8, 16)),
            v => panic!("expected support, got {v:?}"),
        }
        // a badly approximable target supports no epsilon at its exponent
        let ch = Chart::cn(2).with_domain(symmetric_box(1, rat_int(4)));
        let mut cfg = RecordsConfig::new(10_000);
        cfg.window = Some(rat_int(1));
        let target = TargetPoint::AlgebraicParam(golden_ratio());
        let recs = best_approximations(&ch, &target, &cfg).unwrap();
        let rep = vwa_test(&recs, &rat_int(1), 16, 3).unwrap();
        assert_eq!(rep.verdict, VwaVerdict::NoSupport);
    }

    #[test]
    fn mutually_exclusive_verdicts() {
        let ch = Chart::cn(2).with_domain(symmetric_box(1, rat_int(4)));
        let mut cfg = RecordsConfig::new(10_000);
        cfg.window = Some(rat_int(1));
        let target = TargetPoint::AlgebraicParam(golden_ratio());
        let recs = best_approximations(&ch, &target, &cfg).unwrap();
        let ba = ba_test(&recs, &rat_int(1), 0.5).unwrap();
        let vwa = vwa_test(&recs, &rat_int(1), 16, 3).unwrap();
        let ba_confident = ba.verdict == BaVerdict::BadlyApproximableAtScale;
        let vwa_confident = matches!(vwa.verdict, VwaVerdict::SupportedEpsilon(_));
        assert!(!(ba_confident && vwa_confident));
    }

    #[test]
    fn dirichlet_constants_on_circle_bounded() {
        let ch = Chart::sphere(2);
        let targets = seeded_quadratic_targets(8, 42, &rat_int(-1), &rat_int(1));
        assert_eq!(targets.len(), 8);
        let cfg = RecordsConfig::new(1 << 10);
        let rep = dirichlet_test(&ch, &targets, &rat_int(1), &cfg).unwrap();
        assert!(rep.sup_constant.is_finite());
        assert!(rep.sup_constant > 0.0);
        assert!(!rep.levels.is_empty());
    }

    #[test]
    fn transfer_records_through_monomial_chart() {
        // records on veronese(1,2) at 1/phi correspond to parameter records
        // with heights squared and distances within the chart Lipschitz
        // factor (max |d coords/dt| <= 2 on [-1,1])
        let ch = Chart::veronese(1, 2);
        let poly = crate::unipoly::UniPoly::from_i64(&[-1, 1, 1]); // x^2+x-1
        let inv_phi = AlgebraicNumber::new(&poly, rat_int(0), rat_int(1)).unwrap();
        let mut cfg = RecordsConfig::new(10_000);
        cfg.window = Some(rat_int(1));
        let target = TargetPoint::AlgebraicParam(inv_phi.clone());
        let ambient = best_approximations(&ch, &target, &cfg).unwrap();
        // parameter-space records on the identity chart
        let id = Chart::identity(1);
        let mut pcfg = RecordsConfig::new(100);
        pcfg.window = Some(rat_int(1));
        let param_recs =
            best_approximations(&id, &TargetPoint::AlgebraicParam(inv_phi), &pcfg).unwrap();
        // every parameter record denominator q shows up as ambient height q^2
        for pr in &param_recs {
            let q = &pr.height;
            assert!(
                ambient.iter().any(|ar| &ar.height == &(q * q)),
                "missing ambient height for q = {q}"
            );
        }
        // distances comparable: ambient within factor [1, 2] of parameter
        for ar in &ambient {
            let q2 = &ar.height;
            if let Some(pr) = param_recs.iter().find(|pr| &(&pr.height * &pr.height) == q2) {
                let ratio_hi = to_f64(&ar.distance.hi) / to_f64(&pr.distance.lo);
                let ratio_lo = to_f64(&ar.distance.lo) / to_f64(&pr.distance.hi);
                assert!(ratio_hi >= 0.99, "ambient not smaller than parameter distance");
                assert!(ratio_lo <= 2.01, "ambient exceeds Lipschitz factor");
            }
        }
    }
}
