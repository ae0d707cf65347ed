//! Exact enumeration of intrinsic rational points under a height bound.
//!
//! `enumerate_rationals` sweeps chart parameters guided by the chart's sweep
//! rule and keeps exactly the images with height `<= T` in the requested
//! ambient box. `bruteforce_intrinsic` is the independent completeness
//! oracle: it scans every jointly primitive `p/q` in the box and keeps the
//! solutions of the implicit equations. The two must agree on every built-in
//! chart; that equality is a release gate for the sweep rules.

use crate::chart::{intersect_box, Box_, Chart, SweepRule};
use crate::farey::fractions_in_interval;
use crate::mpoly::MPoly;
use crate::point::RationalPoint;
use crate::rational::Rational;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

/// One enumerated point with the parameter that produced it; atlas-completion
/// points (no finite parameter) carry `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumeratedPoint {
    pub point: RationalPoint,
    pub param: Option<Vec<Rational>>,
}

/// Integer range `[ceil(lo * q), floor(hi * q)]` of numerators on one axis.
fn numerator_range(lo: &Rational, hi: &Rational, q: &BigInt) -> (BigInt, BigInt) {
    let q_rat = Rational::from_integer(q.clone());
    let a = (lo * &q_rat).ceil().to_integer();
    let b = (hi * &q_rat).floor().to_integer();
    (a, b)
}

fn range_len(a: &BigInt, b: &BigInt) -> u128 {
    if a > b {
        0
    } else {
        (b - a + 1u32).to_u128().unwrap_or(u128::MAX)
    }
}

/// All parameter vectors with joint denominator `<= den_bound` lying in the
/// window, each exactly once (jointly primitive representation).
/// For `k = 1` the walk is output-sensitive (Farey stepping); for `k >= 2`
/// a denominator sweep with an a-priori budget estimate is used.
fn params_in_window(
    k: usize,
    den_bound: &BigInt,
    window: &Box_,
    extra_filter: Option<&dyn Fn(&[BigInt], &BigInt) -> bool>,
    budget: u128,
) -> Result<Vec<Vec<Rational>>> {
    assert_eq!(window.len(), k);
    if den_bound < &BigInt::one() {
        return Ok(Vec::new());
    }
    if k == 1 {
        let (lo, hi) = &window[0];
        let fracs =
            fractions_in_interval(lo, hi, den_bound, budget.min(usize::MAX as u128) as usize)?;
        let out = fracs
            .into_iter()
            .filter(|t| match extra_filter {
                Some(f) => f(std::slice::from_ref(t.numer()), t.denom()),
                None => true,
            })
            .map(|t| vec![t])
            .collect();
        return Ok(out);
    }
    // a-priori candidate estimate keeps BudgetExceeded deterministic
    let mut estimate: u128 = 0;
    let mut q = BigInt::one();
    while &q <= den_bound {
        let mut per_q: u128 = 1;
        for (lo, hi) in window.iter() {
            let (a, b) = numerator_range(lo, hi, &q);
            per_q = per_q.saturating_mul(range_len(&a, &b));
        }
        estimate = estimate.saturating_add(per_q);
        q += 1u32;
        if estimate > budget {
            return Err(Error::BudgetExceeded { needed: estimate, budget });
        }
    }
    let mut out = Vec::new();
    let mut q = BigInt::one();
    while &q <= den_bound {
        let ranges: Vec<(BigInt, BigInt)> = window
            .iter()
            .map(|(lo, hi)| numerator_range(lo, hi, &q))
            .collect();
        if ranges.iter().all(|(a, b)| a <= b) {
            let mut cursor: Vec<BigInt> = ranges.iter().map(|(a, _)| a.clone()).collect();
            loop {
                let joint = {
                    let mut g = q.clone();
                    for c in &cursor {
                        g = g.gcd(c);
                        if g.is_one() {
                            break;
                        }
                    }
                    g
                };
                if joint.is_one() && extra_filter.map_or(true, |f| f(&cursor, &q)) {
                    out.push(
                        cursor
                            .iter()
                            .map(|c| Rational::new(c.clone(), q.clone()))
                            .collect(),
                    );
                }
                // advance odometer
                let mut i = k;
                let mut done = false;
                loop {
                    if i == 0 {
                        done = true;
                        break;
                    }
                    i -= 1;
                    cursor[i] += 1u32;
                    if cursor[i] <= ranges[i].1 {
                        break;
                    }
                    cursor[i] = ranges[i].0.clone();
                }
                if done {
                    break;
                }
            }
        }
        q += 1u32;
    }
    Ok(out)
}

/// Parameter candidates that can produce an image of height `<= t_max`
/// with parameter inside `window` (already intersected with the domain).
pub(crate) fn param_candidates(
    chart: &Chart,
    t_max: &BigInt,
    window: &Box_,
    budget: u128,
) -> Result<Vec<Vec<Rational>>> {
    match chart.rule() {
        SweepRule::PowerHeight { .. } => {
            let q_bound = chart.param_height_bound(t_max);
            params_in_window(chart.k(), &q_bound, window, None, budget)
        }
        SweepRule::Stereographic => {
            let two_t = t_max * 2;
            if chart.k() == 1 {
                // image height is (a^2 + q^2) / g with g | 2, so a^2 + q^2 <= 2T
                let q_bound = crate::rational::nth_root_floor(&two_t, 2);
                let tt = two_t.clone();
                let filter = move |a: &[BigInt], q: &BigInt| -> bool {
                    &a[0] * &a[0] + q * q <= tt
                };
                params_in_window(1, &q_bound, window, Some(&filter), budget)
            } else {
                // g | 2 q^2, so height >= (q^2 + |a|^2) / (2 q^2)
                let tt = two_t.clone();
                let filter = move |a: &[BigInt], q: &BigInt| -> bool {
                    let norm: BigInt = a.iter().map(|x| x * x).sum();
                    norm + q * q <= &tt * (q * q)
                };
                params_in_window(chart.k(), &two_t, window, Some(&filter), budget)
            }
        }
    }
}

/// The parameter window implied by an ambient box for this chart.
pub(crate) fn param_window(chart: &Chart, t_max: &BigInt, ambient_box: &Box_) -> Option<Box_> {
    let raw: Box_ = match chart.rule() {
        // the linear block leads, so parameters project from the box
        SweepRule::PowerHeight { .. } => ambient_box[0..chart.k()].to_vec(),
        // |t_i| = |p_i| / (q + p_d) <= q <= T for points of height <= T
        SweepRule::Stereographic => {
            let t = Rational::from_integer(t_max.clone());
            (0..chart.k()).map(|_| (-t.clone(), t.clone())).collect()
        }
    };
    intersect_box(&raw, chart.domain())
}

/// Every intrinsic rational point of height `<= t_max` whose parameter lies
/// in the chart domain and whose image lies in `ambient_box`, plus the
/// chart's atlas-completion points. Sorted by (height, numerators), no
/// duplicates.
pub fn enumerate_rationals(
    chart: &Chart,
    t_max: &BigInt,
    ambient_box: &Box_,
    budget: u128,
) -> Result<Vec<EnumeratedPoint>> {
    assert_eq!(ambient_box.len(), chart.d());
    let mut out: Vec<EnumeratedPoint> = Vec::new();
    if let Some(window) = param_window(chart, t_max, ambient_box) {
        let params = param_candidates(chart, t_max, &window, budget)?;
        for t in params {
            let point = match chart.evaluate(&t) {
                Ok(p) => p,
                Err(Error::PoleHit(_)) => continue,
                Err(e) => return Err(e),
            };
            if point.height() <= t_max && point.in_box(ambient_box) {
                out.push(EnumeratedPoint { point, param: Some(t) });
            }
        }
    }
    for p in chart.extra_points() {
        if p.height() <= t_max && p.in_box(ambient_box) {
            out.push(EnumeratedPoint { point: p.clone(), param: None });
        }
    }
    out.sort_by(|a, b| a.point.cmp(&b.point));
    out.dedup_by(|a, b| a.point == b.point);
    Ok(out)
}

/// Independent oracle: all jointly primitive `p/q` with `q <= t_max` in the
/// box satisfying every implicit equation exactly. `d` must be given since
/// the equation list may be empty (full affine space).
pub fn bruteforce_intrinsic(
    implicit_eqs: &[MPoly],
    d: usize,
    t_max: u64,
    ambient_box: &Box_,
    budget: u128,
) -> Result<Vec<RationalPoint>> {
    assert_eq!(ambient_box.len(), d);
    // a-priori budget estimate
    let mut estimate: u128 = 0;
    for q in 1..=t_max {
        let qb = BigInt::from(q);
        let mut per_q: u128 = 1;
        for (lo, hi) in ambient_box.iter() {
            let (a, b) = numerator_range(lo, hi, &qb);
            per_q = per_q.saturating_mul(range_len(&a, &b));
        }
        estimate = estimate.saturating_add(per_q);
        if estimate > budget {
            return Err(Error::BudgetExceeded { needed: estimate, budget });
        }
    }
    let mut out = Vec::new();
    for q in 1..=t_max {
        let qb = BigInt::from(q);
        let ranges: Vec<(BigInt, BigInt)> = ambient_box
            .iter()
            .map(|(lo, hi)| numerator_range(lo, hi, &qb))
            .collect();
        if ranges.iter().any(|(a, b)| a > b) {
            continue;
        }
        let mut cursor: Vec<BigInt> = ranges.iter().map(|(a, _)| a.clone()).collect();
        loop {
            let joint = {
                let mut g = qb.clone();
                for c in &cursor {
                    g = g.gcd(c);
                    if g.is_one() {
                        break;
                    }
                }
                g
            };
            if joint.is_one()
                && implicit_eqs.iter().all(|f| f.vanishes_at_fraction(&cursor, &qb))
            {
                out.push(RationalPoint::from_raw(cursor.clone(), qb.clone()));
            }
            let mut i = d;
            let mut done = false;
            loop {
                if i == 0 {
                    done = true;
                    break;
                }
                i -= 1;
                cursor[i] += 1u32;
                if cursor[i] <= ranges[i].1 {
                    break;
                }
                cursor[i] = ranges[i].0.clone();
            }
            if done {
                break;
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Heights present in a point list, ascending and deduplicated.
pub fn heights_present(points: &[RationalPoint]) -> Vec<BigInt> {
    let mut hs: Vec<BigInt> = points.iter().map(|p| p.height().clone()).collect();
    hs.sort();
    hs.dedup();
    hs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::unit_box;
    use crate::rational::{rat, rat_int};

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn parabola_small_enumeration() {
        let ch = Chart::cn(2);
        let pts = enumerate_rationals(&ch, &big(4), &unit_box(2), 1 << 20).unwrap();
        let records: Vec<String> = pts.iter().map(|e| e.point.to_record()).collect();
        assert_eq!(
            records,
            vec!["-1,1/1", "0,0/1", "1,1/1", "-2,1/4", "2,1/4"]
                .into_iter()
                .map(String::from)
                .collect::<Vec<_>>()
        );
        // round trip: evaluate(param) reproduces the point
        for e in &pts {
            let t = e.param.as_ref().unwrap();
            assert_eq!(&ch.evaluate(t).unwrap(), &e.point);
        }
    }

    #[test]
    fn veronese_12_height_three_only_integers() {
        let ch = Chart::veronese(1, 2);
        let pts = enumerate_rationals(&ch, &big(3), &unit_box(2), 1 << 20).unwrap();
        assert!(pts.iter().all(|e| e.point.height() == &big(1)));
        assert_eq!(pts.len(), 3); // t = -1, 0, 1
    }

    #[test]
    fn circle_twelve_points() {
        let ch = Chart::sphere(2);
        let pts = enumerate_rationals(&ch, &big(5), &unit_box(2), 1 << 20).unwrap();
        let recs: Vec<String> = pts.iter().map(|e| e.point.to_record()).collect();
        let expected = vec![
            "-1,0/1", "0,-1/1", "0,1/1", "1,0/1", "-3,-4/5", "-3,4/5", "-4,-3/5", "-4,3/5",
            "3,-4/5", "3,4/5", "4,-3/5", "4,3/5",
        ];
        assert_eq!(recs.len(), 12);
        for e in expected {
            assert!(recs.contains(&e.to_string()), "missing {e}");
        }
    }

    #[test]
    fn circle_matches_bruteforce() {
        let ch = Chart::sphere(2);
        for t in [5u64, 13, 25] {
            let fast: Vec<RationalPoint> =
                enumerate_rationals(&ch, &big(t as i64), &unit_box(2), 1 << 24)
                    .unwrap()
                    .into_iter()
                    .map(|e| e.point)
                    .collect();
            let slow =
                bruteforce_intrinsic(ch.implicit_eqs(), 2, t, &unit_box(2), 1 << 24).unwrap();
            assert_eq!(fast, slow, "T = {t}");
        }
    }

    #[test]
    fn parabola_bruteforce_heights_are_squares() {
        let ch = Chart::cn(2);
        let pts = bruteforce_intrinsic(ch.implicit_eqs(), 2, 9, &unit_box(2), 1 << 24).unwrap();
        let hs: Vec<u64> = heights_present(&pts).iter().map(|h| h.to_u64().unwrap()).collect();
        assert_eq!(hs, vec![1, 4, 9]);
    }

    #[test]
    fn empty_box_empty_result() {
        let ch = Chart::cn(2);
        let bx = vec![(rat_int(5), rat_int(6)), (rat_int(5), rat_int(6))];
        let pts = bruteforce_intrinsic(ch.implicit_eqs(), 2, 5, &bx, 1 << 20).unwrap();
        assert!(pts.is_empty());
    }

    #[test]
    fn budget_is_a_priori() {
        let ch = Chart::sphere(3);
        let err = bruteforce_intrinsic(ch.implicit_eqs(), 3, 50, &unit_box(3), 100);
        assert!(matches!(err, Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn sphere3_matches_bruteforce_small() {
        let ch = Chart::sphere(3);
        let t = 9u64;
        let fast: Vec<RationalPoint> =
            enumerate_rationals(&ch, &big(t as i64), &unit_box(3), 1 << 26)
                .unwrap()
                .into_iter()
                .map(|e| e.point)
                .collect();
        let slow = bruteforce_intrinsic(ch.implicit_eqs(), 3, t, &unit_box(3), 1 << 26).unwrap();
        assert_eq!(fast, slow);
        // the interesting case: (1/3, 2/3, 2/3) needs parameter (1/5, 2/5)
        let target = RationalPoint::reduce(&[rat(1, 3), rat(2, 3), rat(2, 3)]);
        assert!(fast.contains(&target));
    }

    #[test]
    fn veronese22_matches_bruteforce_tiny() {
        let ch = Chart::veronese(2, 2);
        let t = 4u64;
        let fast: Vec<RationalPoint> =
            enumerate_rationals(&ch, &big(t as i64), &unit_box(5), 1 << 26)
                .unwrap()
                .into_iter()
                .map(|e| e.point)
                .collect();
        let slow = bruteforce_intrinsic(ch.implicit_eqs(), 5, t, &unit_box(5), 1 << 26).unwrap();
        assert_eq!(fast, slow);
    }
}
