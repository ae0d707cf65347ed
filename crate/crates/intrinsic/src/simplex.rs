//! Empirical verifier for the intrinsic simplex property.
//!
//! For a chart center `s` and radius `rho`, the set `S` of intrinsic
//! rational points with parameter in the max-norm ball `B(s, rho)` and
//! height at most `kappa * rho^(-N/(d+1))` should lie on one affine
//! hyperplane. The verifier collects `S` exactly, decides containment by
//! exact rank, extracts an integer functional from the left kernel when
//! containment holds, and reports failures with the full determinant data.
//!
//! Fractional powers of `rho` are never approximated: in the common case
//! `(d+1) | N` the exponent is an integer and the cap is exact for every
//! rational `rho`; otherwise `rho` is rounded up to a dominating dyadic
//! power, which only shrinks `S` and can never create a false failure.

use crate::chart::{intersect_box, Box_, Chart};
use crate::dirichlet::DirichletConstants;
use crate::enumerate::{param_candidates, EnumeratedPoint};
use crate::matrix::{primitive_integer_vector, QMatrix};
use crate::point::RationalPoint;
use crate::rational::{
    first_primes, floor_int, pow_i64, rat_int, rational_str, to_bigint, van_der_corput, Rational,
};
use crate::Result;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Height cap `floor(kappa * rho^(-N/(d+1)))`, computed exactly or by a
/// conservative dominating dyadic power (see module docs).
pub fn height_cap(kappa: &Rational, rho: &Rational, constants: &DirichletConstants) -> BigInt {
    assert!(rho.is_positive());
    if !kappa.is_positive() {
        return BigInt::zero();
    }
    let weight = to_bigint(&constants.weight);
    let d_plus_1 = BigInt::from(constants.d + 1);
    let exponent = Rational::new(weight, d_plus_1);
    if exponent.is_integer() {
        let e = exponent.to_integer().to_i64().expect("exponent fits");
        let inv = Rational::one() / rho.clone();
        return floor_int(&(kappa * pow_i64(&inv, e)));
    }
    // largest u with 2^-u >= rho, sign-free
    let u = signed_dyadic_level(rho);
    // rho^(-N/(d+1)) >= 2^(floor(u * N / (d+1)))
    let num = BigInt::from(u) * exponent.numer();
    let den = exponent.denom();
    let e = num.div_floor(den).to_i64().expect("dyadic exponent fits");
    floor_int(&(kappa * pow_i64(&rat_int(2), e)))
}

/// Largest integer `u` (possibly negative) with `2^-u >= r`, i.e.
/// `floor(log2(1/r))`.
fn signed_dyadic_level(r: &Rational) -> i64 {
    assert!(r.is_positive());
    if *r <= Rational::one() {
        crate::rational::dyadic_level(r) as i64
    } else {
        // 2^-u >= r > 1 forces u < 0: largest u with 2^|u| <= ... flip:
        // smallest v >= 0 with 2^v >= r, then u = -v adjusted
        let inv = Rational::one() / r.clone();
        let v = crate::rational::dyadic_level(&inv) as i64;
        // 2^-v >= 1/r, so 2^v <= r; check whether 2^(v) == r exactly
        if pow_i64(&rat_int(2), v) == *r {
            -v
        } else {
            -v - 1
        }
    }
}

/// The point set `S` for one (center, radius, kappa) query.
pub fn collect_s(
    chart: &Chart,
    center: &[Rational],
    radius: &Rational,
    kappa: &Rational,
    constants: &DirichletConstants,
    budget: u128,
) -> Result<Vec<EnumeratedPoint>> {
    assert_eq!(center.len(), chart.k());
    assert!(radius.is_positive());
    let cap = height_cap(kappa, radius, constants);
    if cap < BigInt::one() {
        return Ok(Vec::new());
    }
    let ball: Box_ = center
        .iter()
        .map(|c| (c - radius, c + radius))
        .collect();
    let Some(window) = intersect_box(&ball, chart.domain()) else {
        return Ok(Vec::new());
    };
    let params = param_candidates(chart, &cap, &window, budget)?;
    let mut out = Vec::new();
    for t in params {
        let point = match chart.evaluate(&t) {
            Ok(p) => p,
            Err(crate::Error::PoleHit(_)) => continue,
            Err(e) => return Err(e),
        };
        if point.height() <= &cap {
            out.push(EnumeratedPoint { point, param: Some(t) });
        }
    }
    out.sort_by(|a, b| a.point.cmp(&b.point));
    out.dedup_by(|a, b| a.point == b.point);
    Ok(out)
}

/// Affine-hyperplane containment report for a point set in `R^d`.
#[derive(Debug, Clone)]
pub struct ContainmentReport {
    /// Rank of the `(d+1) x |S|` matrix with columns `(1, r_i)`.
    pub rank: usize,
    pub contained: bool,
    /// `w . x = b` with jointly primitive integers; `None` when the set is
    /// empty (nothing to constrain).
    pub functional: Option<(Vec<BigInt>, BigInt)>,
}

pub fn hyperplane_containment(points: &[RationalPoint], d: usize) -> ContainmentReport {
    if points.is_empty() {
        return ContainmentReport { rank: 0, contained: true, functional: None };
    }
    let mut rows: Vec<Vec<Rational>> = vec![vec![Rational::one(); points.len()]];
    for i in 0..d {
        rows.push(points.iter().map(|p| p.coordinate(i)).collect());
    }
    let m = QMatrix::from_rows(rows);
    let rank = m.exact_rank();
    let contained = rank <= d;
    let functional = if contained {
        let v = m.left_kernel_vector().expect("rank-deficient matrix has a kernel");
        let ints = primitive_integer_vector(&v);
        let b = -ints[0].clone();
        let w = ints[1..].to_vec();
        debug_assert!(points.iter().all(|p| {
            let mut acc = -b.clone() * p.height();
            for (wi, ni) in w.iter().zip(p.numerators()) {
                acc += wi * ni;
            }
            acc.is_zero()
        }));
        Some((w, b))
    } else {
        None
    };
    ContainmentReport { rank, contained, functional }
}

/// Configuration for a seeded sweep of simplex queries.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub samples: u64,
    /// Dyadic radius levels: `rho = 2^-u` with `u` uniform in
    /// `[level_min, level_max]`.
    pub level_min: u64,
    pub level_max: u64,
    pub kappa: Rational,
    pub seed: u64,
    pub budget: u128,
    /// Center sampling window; defaults to the unit box clipped to the
    /// domain when `None`.
    pub window: Option<Box_>,
}

impl SweepConfig {
    pub fn new(samples: u64, kappa: Rational, seed: u64) -> SweepConfig {
        SweepConfig {
            samples,
            level_min: 0,
            level_max: 20,
            kappa,
            seed,
            budget: 1 << 32,
            window: None,
        }
    }
}

/// One sample of a sweep, with everything needed to replay it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: u64,
    pub center: Vec<String>,
    pub radius: String,
    pub kappa: String,
    pub s_len: usize,
    pub rank: usize,
    pub passed: bool,
    pub functional: Option<String>,
}

/// A containment failure with its exact determinant witness.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FailureDetail {
    pub index: u64,
    pub points: Vec<String>,
    pub witness_points: Vec<String>,
    pub det: String,
    pub height_product: String,
    /// `det * prod(q_i)` is a nonzero integer, so `|det| >= 1/prod(q_i)`.
    pub integrality_ok: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub samples: Vec<SampleRecord>,
    pub pass_count: u64,
    pub failures: Vec<FailureDetail>,
    /// Sample index attaining the largest `|S|`.
    pub worst_index: Option<u64>,
    pub worst_s_len: usize,
}

impl SweepReport {
    pub fn pass_rate(&self) -> f64 {
        if self.samples.is_empty() {
            1.0
        } else {
            self.pass_count as f64 / self.samples.len() as f64
        }
    }
}

/// Greedy affinely independent subset of size `d+2` witnessing a failure
/// (columns `(1, r)` of full rank `d+1`), together with its determinant
/// data computed from the first `d+1` points found.
fn failure_witness(points: &[RationalPoint], d: usize) -> (Vec<RationalPoint>, Rational) {
    let mut chosen: Vec<RationalPoint> = Vec::new();
    for p in points {
        let mut trial = chosen.clone();
        trial.push(p.clone());
        let mut rows: Vec<Vec<Rational>> = vec![vec![Rational::one(); trial.len()]];
        for i in 0..d {
            rows.push(trial.iter().map(|x| x.coordinate(i)).collect());
        }
        if QMatrix::from_rows(rows).exact_rank() == trial.len() {
            chosen = trial;
            if chosen.len() == d + 1 {
                break;
            }
        }
    }
    assert_eq!(chosen.len(), d + 1, "failure without d+1 independent points");
    let mut rows: Vec<Vec<Rational>> = vec![vec![Rational::one(); d + 1]];
    for i in 0..d {
        rows.push(chosen.iter().map(|x| x.coordinate(i)).collect());
    }
    let det = QMatrix::from_rows(rows).exact_det();
    (chosen, det)
}

/// Deterministic seeded sweep: low-discrepancy centers over the window,
/// log-uniform dyadic radii, one exact containment verdict per sample.
pub fn simplex_sweep(
    chart: &Chart,
    constants: &DirichletConstants,
    cfg: &SweepConfig,
) -> Result<SweepReport> {
    let window = match &cfg.window {
        Some(w) => w.clone(),
        None => intersect_box(&crate::chart::unit_box(chart.k()), chart.domain())
            .expect("domain misses the unit box"),
    };
    let bases = first_primes(chart.k());
    let offset = cfg.seed % 8191;
    let outcomes: Vec<Result<(SampleRecord, Option<FailureDetail>)>> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(i.wrapping_mul(0x9E37)));
            let center: Vec<Rational> = window
                .iter()
                .zip(bases.iter())
                .map(|((lo, hi), &b)| {
                    let u = van_der_corput(offset + i + 1, b);
                    lo + (hi - lo) * u
                })
                .collect();
            let level = rng.gen_range(cfg.level_min..=cfg.level_max);
            let radius = Rational::new(BigInt::one(), BigInt::one() << level);
            let s = collect_s(chart, &center, &radius, &cfg.kappa, constants, cfg.budget)?;
            let pts: Vec<RationalPoint> = s.iter().map(|e| e.point.clone()).collect();
            let rep = hyperplane_containment(&pts, chart.d());
            let record = SampleRecord {
                index: i,
                center: center.iter().map(rational_str).collect(),
                radius: rational_str(&radius),
                kappa: rational_str(&cfg.kappa),
                s_len: pts.len(),
                rank: rep.rank,
                passed: rep.contained,
                functional: rep.functional.as_ref().map(|(w, b)| {
                    let ws: Vec<String> = w.iter().map(|x| x.to_string()).collect();
                    format!("{}={}", ws.join(","), b)
                }),
            };
            let failure = if rep.contained {
                None
            } else {
                let (witness, det) = failure_witness(&pts, chart.d());
                let mut height_product = BigInt::one();
                for p in &witness {
                    height_product *= p.height();
                }
                let scaled = det.clone() * Rational::from_integer(height_product.clone());
                let integrality_ok = scaled.is_integer() && scaled.numer().abs() >= BigInt::one();
                Some(FailureDetail {
                    index: i,
                    points: pts.iter().map(|p| p.to_record()).collect(),
                    witness_points: witness.iter().map(|p| p.to_record()).collect(),
                    det: rational_str(&det),
                    height_product: height_product.to_string(),
                    integrality_ok,
                })
            };
            Ok((record, failure))
        })
        .collect();
    let mut samples = Vec::with_capacity(outcomes.len());
    let mut failures = Vec::new();
    let mut pass_count = 0;
    let mut worst_index = None;
    let mut worst_s_len = 0;
    for o in outcomes {
        let (rec, fail) = o?;
        if rec.passed {
            pass_count += 1;
        }
        if rec.s_len > worst_s_len {
            worst_s_len = rec.s_len;
            worst_index = Some(rec.index);
        }
        if let Some(f) = fail {
            failures.push(f);
        }
        samples.push(rec);
    }
    Ok(SweepReport { samples, pass_count, failures, worst_index, worst_s_len })
}

/// Largest kappa on a bisection grid for which the seeded sweep passes
/// completely. An empirical lower-bound estimate tied to the seed, not the
/// true supremum.
pub fn kappa_calibrate(
    chart: &Chart,
    constants: &DirichletConstants,
    samples: u64,
    bisect_steps: u32,
    seed: u64,
) -> Result<Rational> {
    let passes = |kappa: &Rational| -> Result<bool> {
        let mut cfg = SweepConfig::new(samples, kappa.clone(), seed);
        cfg.level_max = 16;
        Ok(simplex_sweep(chart, constants, &cfg)?.failures.is_empty())
    };
    let mut lo = Rational::zero();
    let mut hi = rat_int(4);
    if passes(&hi)? {
        return Ok(hi);
    }
    for _ in 0..bisect_steps {
        let mid = (&lo + &hi) / rat_int(2);
        if passes(&mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::dirichlet_constants;
    use crate::rational::rat;

    #[test]
    fn height_cap_integer_exponent_is_exact() {
        // parabola in R^2: N = 3, d+1 = 3, exponent 1: cap = floor(k / rho)
        let cst = dirichlet_constants(1, 2).unwrap();
        assert_eq!(height_cap(&rat_int(1), &rat(1, 4), &cst), BigInt::from(4));
        assert_eq!(height_cap(&rat(1, 10), &rat(1, 1024), &cst), BigInt::from(102));
        assert_eq!(height_cap(&rat_int(0), &rat(1, 4), &cst), BigInt::zero());
    }

    #[test]
    fn height_cap_fractional_exponent_dominates() {
        // full space R^1: N = 1, d+1 = 2, exponent 1/2
        let cst = dirichlet_constants(1, 1).unwrap();
        // rho = 2^-4: cap = floor(k * 2^2)
        assert_eq!(height_cap(&rat_int(1), &rat(1, 16), &cst), BigInt::from(4));
        // rho = 1/10 (not dyadic): dominated by 2^-3, floor(3/2) = 1: 2^1
        assert_eq!(height_cap(&rat_int(1), &rat(1, 10), &cst), BigInt::from(2));
        // rho > 1 never increases the cap
        assert!(height_cap(&rat_int(1), &rat_int(2), &cst) <= BigInt::one());
    }

    #[test]
    fn collect_s_parabola_origin() {
        let ch = Chart::cn(2);
        let cst = dirichlet_constants(1, 2).unwrap();
        let s = collect_s(&ch, &[rat_int(0)], &rat(1, 4), &rat_int(1), &cst, 1 << 20).unwrap();
        let recs: Vec<String> = s.iter().map(|e| e.point.to_record()).collect();
        assert_eq!(recs, vec!["0,0/1"]);
    }

    #[test]
    fn containment_small_sets() {
        // <= d points are always contained
        let p1 = RationalPoint::reduce(&[rat_int(0), rat_int(0)]);
        let rep = hyperplane_containment(&[p1.clone()], 2);
        assert!(rep.contained);
        let (w, b) = rep.functional.unwrap();
        // deterministic kernel: w = (1, 0), b = 0 -> hyperplane x1 = 0
        assert_eq!((w, b), (vec![BigInt::from(1), BigInt::zero()], BigInt::zero()));

        // three distinct parabola points are never on a line
        let pts = vec![
            RationalPoint::reduce(&[rat_int(0), rat_int(0)]),
            RationalPoint::reduce(&[rat(1, 2), rat(1, 4)]),
            RationalPoint::reduce(&[rat(1, 3), rat(1, 9)]),
        ];
        let rep = hyperplane_containment(&pts, 2);
        assert_eq!(rep.rank, 3);
        assert!(!rep.contained);
    }

    #[test]
    fn containment_sphere_four_points() {
        // (0,0,1), (3/5,0,4/5), (0,3/5,4/5), (-3/5,0,4/5): no common plane
        let pts = vec![
            RationalPoint::reduce(&[rat_int(0), rat_int(0), rat_int(1)]),
            RationalPoint::reduce(&[rat(3, 5), rat_int(0), rat(4, 5)]),
            RationalPoint::reduce(&[rat_int(0), rat(3, 5), rat(4, 5)]),
            RationalPoint::reduce(&[rat(-3, 5), rat_int(0), rat(4, 5)]),
        ];
        let rep = hyperplane_containment(&pts, 3);
        assert_eq!(rep.rank, 4);
        assert!(!rep.contained);
    }

    #[test]
    fn sweep_parabola_small_kappa_passes() {
        let ch = Chart::cn(2);
        let cst = dirichlet_constants(1, 2).unwrap();
        let mut cfg = SweepConfig::new(64, rat(1, 10), 7);
        cfg.level_max = 12;
        let rep = simplex_sweep(&ch, &cst, &cfg).unwrap();
        assert_eq!(rep.pass_count, 64);
        assert!(rep.failures.is_empty());
    }

    #[test]
    fn sweep_monotone_in_kappa() {
        let ch = Chart::cn(2);
        let cst = dirichlet_constants(1, 2).unwrap();
        let run = |kappa: Rational| {
            let mut cfg = SweepConfig::new(48, kappa, 11);
            cfg.level_max = 10;
            simplex_sweep(&ch, &cst, &cfg).unwrap()
        };
        let big = run(rat_int(3));
        let small = run(rat(1, 10));
        // shrinking kappa can only turn failures into passes
        assert!(small.pass_count >= big.pass_count);
        for f in &big.failures {
            assert!(f.integrality_ok, "integrality must hold on every failure");
        }
    }

    #[test]
    fn calibrated_kappa_passes_on_same_seed() {
        let ch = Chart::cn(2);
        let cst = dirichlet_constants(1, 2).unwrap();
        let kappa = kappa_calibrate(&ch, &cst, 32, 6, 5).unwrap();
        assert!(kappa.is_positive());
        let mut cfg = SweepConfig::new(32, kappa, 5);
        cfg.level_max = 16;
        let rep = simplex_sweep(&ch, &cst, &cfg).unwrap();
        assert!(rep.failures.is_empty());
    }
}
