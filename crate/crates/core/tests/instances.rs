//! End-to-end checks on small maximal curves.

use std::sync::Arc;

use maxcurve_core::agcode::{build_code, min_distance_exact, DEFAULT_DISTANCE_BUDGET};
use maxcurve_core::theorems::{
    bounds_report, canonical_additive, conjecture_explore, theorem01_check, Branch,
    DEFAULT_CONJECTURE_BUDGET,
};
use maxcurve_core::weierstrass::{ramification_audit, Sampling};
use maxcurve_core::{CurveModel, FieldTower, Level};

fn tower(p: u32, a: u32) -> Arc<FieldTower> {
    Arc::new(FieldTower::new(p, a).unwrap())
}

#[test]
fn maximal_counts() {
    for (p, a, m, count) in [
        (2, 1, 3, 9),
        (3, 1, 2, 16),
        (3, 1, 4, 28),
        (5, 1, 2, 46),
        (5, 1, 3, 66),
    ] {
        let c = CurveModel::hermitian(tower(p, a), m).unwrap();
        assert_eq!(c.count_points(Level::Fq2).unwrap(), count);
        assert!(c.is_maximal().unwrap().maximal);
    }
}

#[test]
fn quartic_extension_counts() {
    for (p, m) in [(3u32, 2u64), (2, 3), (5, 3)] {
        let c = CurveModel::hermitian(tower(p, 1), m).unwrap();
        let predicted = c.predicted_count(2).unwrap();
        assert_eq!(c.count_points(Level::Fq4).unwrap() as i128, predicted);
    }
}

#[test]
fn audit_on_h25() {
    // n = 3 and n·m = q+1.
    let c = CurveModel::hermitian(tower(5, 1), 2).unwrap();
    let r = ramification_audit(&c, Sampling::Complete).unwrap();
    assert!(r.all_identities, "{:?}", r.failures);
    assert_eq!((r.t1, r.t2, r.w1), (6, 40, 2));
    let b = bounds_report(&c).unwrap();
    assert!(b.castelnuovo_attained);
}

#[test]
fn hermitian_q3_is_in_the_q_branch() {
    let c = CurveModel::hermitian(tower(3, 1), 4).unwrap();
    let v = theorem01_check(&c).unwrap();
    assert_eq!((v.branch, v.n_m1), (Branch::Q, 3));
    assert_eq!(v.conjecture_relation, Some(true));
}

#[test]
fn conjecture_q9_cubics() {
    let r = conjecture_explore(&tower(3, 2), 3, DEFAULT_CONJECTURE_BUDGET).unwrap();
    assert_eq!(r.candidates, 80);
    assert!(r.consistent);
}

#[test]
fn conjecture_q16_quartics() {
    let t = tower(2, 4);
    let r = conjecture_explore(&t, 4, DEFAULT_CONJECTURE_BUDGET).unwrap();
    let scalars: Vec<_> = t
        .level_elements(Level::Fq2)
        .into_iter()
        .filter(|&c| !c.is_zero() && t.pow(c, 4 * 15) == t.one())
        .collect();
    let canon = canonical_additive(&t, &[t.one(), t.zero(), t.one()], &scalars, 4);
    let hit = r
        .hits
        .iter()
        .find(|h| h.coeffs == canon)
        .expect("T^4+T is maximal");
    assert_eq!((hit.points, hit.two_g, hit.n), (1025, 48, 4));
    assert!(r.consistent);
}

#[test]
fn hermitian_f9_code_meets_goppa_bound() {
    let c = CurveModel::hermitian(tower(3, 1), 4).unwrap();
    for lambda in [4u64, 6, 8] {
        let code = build_code(&c, lambda).unwrap();
        let d = min_distance_exact(c.tower(), &code, DEFAULT_DISTANCE_BUDGET).unwrap();
        assert!(d >= code.params.d_designed);
        assert!(code.params.k + d <= code.params.n + 1);
    }
}
