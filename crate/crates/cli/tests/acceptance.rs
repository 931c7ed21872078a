//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use maxcurve_core::agcode::{build_code, min_distance_exact, DEFAULT_DISTANCE_BUDGET};
use maxcurve_core::theorems::{bounds_report, normalize_round_trip, theorem01_check, Branch};
use maxcurve_core::weierstrass::{
    order_theorem_audit, pair_genus, ramification_audit, selmer_upper_bound, NumericalSemigroup,
    Sampling,
};
use maxcurve_core::{CurveModel, FieldElement, FieldTower, FunctionField, Level, Point};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn tower(p: u32, a: u32) -> Arc<FieldTower> {
    Arc::new(FieldTower::new(p, a).expect("tower"))
}

fn h(p: u32, a: u32, m: u64) -> CurveModel {
    CurveModel::hermitian(tower(p, a), m).expect("curve")
}

fn t2t_d5() -> CurveModel {
    let t = tower(2, 2);
    CurveModel::additive(t.clone(), vec![t.one(), t.one()], 5).expect("curve")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn maximality_counts() -> Check {
    let mut cases: Vec<(String, CurveModel, u64)> = vec![
        ("H_{3,2}/F_4".into(), h(2, 1, 3), 9),
        ("H_{2,3}/F_9".into(), h(3, 1, 2), 16),
        ("H_{4,3}/F_9".into(), h(3, 1, 4), 28),
        ("H_{2,5}/F_25".into(), h(5, 1, 2), 46),
        ("H_{3,5}/F_25".into(), h(5, 1, 3), 66),
    ];
    cases.push(("(T^2+T, d=5)/F_16".into(), t2t_d5(), 33));
    let mut seen = Vec::new();
    for (name, c, expected) in &cases {
        let n = c.count_points(Level::Fq2).map_err(err)?;
        let hw = c.hasse_weil_bound();
        ensure(n == *expected && hw == *expected, || {
            format!("{name}: counted {n}, q^2+2gq+1 = {hw}, expected {expected}")
        })?;
        seen.push(format!("{name}={n}"));
    }
    Ok(seen.join(" "))
}

fn quartic_counts() -> Check {
    let mut seen = Vec::new();
    for (name, c) in [
        ("H_{2,3}", h(3, 1, 2)),
        ("H_{3,2}", h(2, 1, 3)),
        ("H_{3,5}", h(5, 1, 3)),
    ] {
        let q = c.q() as i128;
        let g = c.genus() as i128;
        let formula = q.pow(4) + 1 - 2 * g * q * q;
        let counted = c.count_points(Level::Fq4).map_err(err)? as i128;
        let predicted = c.predicted_count(2).map_err(err)?;
        ensure(counted == formula && predicted == formula, || {
            format!("{name}: counted {counted}, q^4+1-2gq^2 = {formula}")
        })?;
        seen.push(format!("{name}={counted}"));
    }
    Ok(seen.join(" "))
}

fn stohr_voloch_accounting() -> Check {
    let r = ramification_audit(&h(5, 1, 3), Sampling::Complete).map_err(err)?;
    ensure(
        r.deg_r == 72 && r.w1 * r.t1 as i64 + r.w2 * r.t2 as i64 == 72,
        || {
            format!(
                "H_{{3,5}} degR {} vs weights {}·{} + {}·{}",
                r.deg_r, r.w1, r.t1, r.w2, r.t2
            )
        },
    )?;
    ensure((r.t1, r.t2, r.w1, r.w2) == (6, 60, 2, 1), || {
        format!("H_{{3,5}} census {:?}", (r.t1, r.t2, r.w1, r.w2))
    })?;
    ensure(
        r.deg_s == 204 && r.s_weight_total == 204 && 6 * 4 + 60 * 3 == r.s_weight_total,
        || {
            format!(
                "H_{{3,5}} degS {} vs per-point sum {}",
                r.deg_s, r.s_weight_total
            )
        },
    )?;
    ensure(r.all_identities, || {
        format!("H_{{3,5}} failures: {:?}", r.failures)
    })?;
    let r2 = ramification_audit(&h(3, 1, 2), Sampling::Complete).map_err(err)?;
    ensure(
        r2.deg_r == 16 && r2.t1 + r2.t2 == 16 && r2.w1 == 1 && r2.w2 == 1,
        || {
            format!(
                "H_{{2,3}} degR {} census {:?}",
                r2.deg_r,
                (r2.t1, r2.t2, r2.w1)
            )
        },
    )?;
    ensure(r2.all_identities, || {
        format!("H_{{2,3}} failures: {:?}", r2.failures)
    })?;
    Ok("H_{3,5}: degR 72 = 2·6+1·60, degS 204 = 6·4+60·3; H_{2,3}: degR 16 = 16·1".into())
}

fn order_theorems() -> Check {
    let mut seen = Vec::new();
    for (name, c) in [("H_{2,3}", h(3, 1, 2)), ("H_{3,5}", h(5, 1, 3))] {
        let r = order_theorem_audit(&c, Sampling::Complete).map_err(err)?;
        let total = c.count_points(Level::Fq4).map_err(err)? as usize;
        ensure(r.points_checked == total, || {
            format!("{name}: checked {} of {total}", r.points_checked)
        })?;
        ensure(r.all_hold() && r.exceptions.is_empty(), || {
            format!(
                "{name}: {} exceptions, first {:?}",
                r.exceptions.len(),
                r.exceptions.first()
            )
        })?;
        seen.push(format!("{name}: {total} points, 0 exceptions"));
    }
    Ok(seen.join("; "))
}

/// A section of (q+1)P∞ with divisor exactly Fr(P) + qP.
fn frobenius_witness(c: &CurveModel, p: &Point) -> Result<(), String> {
    let ff = FunctionField::new(c);
    let q = c.q();
    let fr = c.frobenius(p);
    let constraints = if fr == *p {
        vec![(*p, q + 1)]
    } else {
        vec![(*p, q), (fr, 1)]
    };
    let res = ff.solve_section(q + 1, &constraints).map_err(err)?;
    let w = res.witness.ok_or_else(|| format!("no section at {p:?}"))?;
    let exact = if fr == *p {
        w.order_at(p) == q + 1 && w.zeros.len() == 1
    } else {
        w.order_at(p) == q && w.order_at(&fr) == 1 && w.zeros.len() == 2
    };
    ensure(w.degree_balanced && w.pole_order == q + 1 && exact, || {
        format!(
            "bad witness at {p:?}: pole {} zeros {:?}",
            w.pole_order, w.zeros
        )
    })
}

fn frobenius_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut seen = Vec::new();
    for (name, c) in [("H_{2,3}", h(3, 1, 2)), ("H_{3,5}", h(5, 1, 3))] {
        let pts = c.enumerate_points(Level::Fq4).map_err(err)?;
        let (mut rat, mut non): (Vec<Point>, Vec<Point>) = pts
            .into_iter()
            .filter(|p| !p.is_infinity())
            .partition(|p| c.is_rational(p));
        // Take 50 of each when available, otherwise every point.
        rat.shuffle(&mut rng);
        non.shuffle(&mut rng);
        rat.truncate(50);
        non.truncate(50);
        for p in rat.iter().chain(&non) {
            frobenius_witness(&c, p)?;
        }
        seen.push(format!(
            "{name}: {}/{} rational, {}/{} non-rational",
            rat.len(),
            rat.len(),
            non.len(),
            non.len()
        ));
    }
    Ok(seen.join("; "))
}

fn dichotomy() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (name, c) in [("H_{2,3}", h(3, 1, 2)), ("H_{3,5}", h(5, 1, 3))] {
        let v = theorem01_check(&c).map_err(err)?;
        ensure(
            v.branch == Branch::QPlusOne && v.genus_identity == Some(true) && v.holds,
            || format!("{name}: {v:?}"),
        )?;
        let t = c.tower_arc();
        let kstar: Vec<FieldElement> = t
            .level_elements(Level::Fq2)
            .into_iter()
            .filter(|x| !x.is_zero())
            .collect();
        for _ in 0..10 {
            let beta = kstar[rng.gen_range(0..kstar.len())];
            let gamma = kstar[rng.gen_range(0..kstar.len())];
            let r = normalize_round_trip(t, c.d(), beta, gamma).map_err(err)?;
            ensure(r.verified, || {
                format!("{name}: round trip failed for {beta:?}, {gamma:?}")
            })?;
        }
    }
    let v = theorem01_check(&t2t_d5()).map_err(err)?;
    ensure(
        v.branch == Branch::Q && v.n_m1 == 4 && v.input.q == 4,
        || format!("T^2+T: {v:?}"),
    )?;
    Ok("H_{2,3}, H_{3,5}: case (i) + round trips; (T^2+T, d=5): n·m_1 = 4 = q".into())
}

fn bounds() -> Check {
    let b = bounds_report(&h(5, 1, 3)).map_err(err)?;
    ensure(b.castelnuovo == 8 && b.two_g == 8, || {
        format!("H_{{3,5}}: {b:?}")
    })?;
    let b = bounds_report(&h(5, 1, 2)).map_err(err)?;
    ensure(b.castelnuovo == 4 && b.two_g == 4, || {
        format!("H_{{2,5}}: {b:?}")
    })?;
    let all = [
        h(2, 1, 3),
        h(3, 1, 2),
        h(3, 1, 4),
        h(5, 1, 2),
        h(5, 1, 3),
        t2t_d5(),
    ];
    for c in &all {
        let b = bounds_report(c).map_err(err)?;
        ensure(b.lewittes_ok && b.all_ok, || format!("{c:?}: {b:?}"))?;
    }
    Ok(format!(
        "c(2,5) = 8, c(3,5) = 4 attained; Lewittes holds on {} instances",
        all.len()
    ))
}

fn goppa_codes() -> Check {
    let c = h(2, 1, 3);
    let mut seen = Vec::new();
    for (lambda, k, d) in [(3u64, 3u64, 5u64), (2, 2, 6)] {
        let code = build_code(&c, lambda).map_err(err)?;
        let exact = min_distance_exact(c.tower(), &code, DEFAULT_DISTANCE_BUDGET).map_err(err)?;
        let p = code.params;
        ensure(
            p.n == 8 && p.k == k && exact == d && exact >= p.d_designed,
            || {
                format!(
                    "λ={lambda}: [{}, {}] d_exact {exact} d_designed {}",
                    p.n, p.k, p.d_designed
                )
            },
        )?;
        seen.push(format!("[{},{},{}]", p.n, p.k, exact));
    }
    Ok(seen.join(" "))
}

fn property_suites() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    // Field axioms.
    for (p, a) in [(2u32, 1u32), (3, 1), (2, 2), (5, 1)] {
        let t = FieldTower::new(p, a).map_err(err)?;
        let n = t.size();
        for _ in 0..500 {
            let [x, y, z] = [0; 3].map(|_| t.element(rng.gen_range(0..n)).expect("index"));
            ensure(
                t.mul(x, t.add(y, z)) == t.add(t.mul(x, y), t.mul(x, z)),
                || "distributivity".into(),
            )?;
            ensure(t.add(x, t.neg(x)).is_zero(), || "additive inverse".into())?;
            ensure(t.mul(t.mul(x, y), z) == t.mul(x, t.mul(y, z)), || {
                "associativity".into()
            })?;
            if !x.is_zero() {
                ensure(t.mul(x, t.inv(x).map_err(err)?) == t.one(), || {
                    "inverse".into()
                })?;
            }
        }
    }
    // Valuation axioms at random F_{q^4}-points.
    let c = h(5, 1, 3);
    let ff = FunctionField::new(&c);
    let t = c.tower();
    let basis = ff.rr_basis(12);
    let pts = c.enumerate_points(Level::Fq4).map_err(err)?;
    let k: Vec<FieldElement> = t.level_elements(Level::Fq2);
    let random_f = |rng: &mut ChaCha8Rng| {
        let mut f = ff.constant(t.zero());
        for &m in &basis.monomials {
            if rng.gen_bool(0.5) {
                f = ff.add(&f, &ff.monomial_times(m, k[rng.gen_range(0..k.len())]));
            }
        }
        f
    };
    for _ in 0..60 {
        let p = pts[rng.gen_range(0..pts.len() - 1)];
        let (f, g) = (random_f(&mut rng), random_f(&mut rng));
        if f.is_zero() || g.is_zero() {
            continue;
        }
        let (vf, vg) = (
            ff.valuation_at(&p, &f).map_err(err)?,
            ff.valuation_at(&p, &g).map_err(err)?,
        );
        let vfg = ff.valuation_at(&p, &ff.mul(&f, &g)).map_err(err)?;
        ensure(vfg == vf + vg, || format!("v(fg) = {vfg} != {vf} + {vg}"))?;
        let s = ff.add(&f, &g);
        if !s.is_zero() {
            let vs = ff.valuation_at(&p, &s).map_err(err)?;
            ensure(vs >= vf.min(vg), || "ultrametric inequality".into())?;
        }
    }
    // Riemann-Roch dimension.
    for c in [h(3, 1, 2), h(5, 1, 3), h(3, 1, 4), t2t_d5()] {
        let g = c.genus();
        let ff = FunctionField::new(&c);
        for lambda in (2 * g).saturating_sub(1)..2 * g + 15 {
            let dim = ff.rr_basis(lambda).len() as u64;
            ensure(dim == lambda + 1 - g, || {
                format!("{c:?}: dim L({lambda}P) = {dim}")
            })?;
        }
    }
    // pair_genus against the sieve.
    for r in 1..=50u64 {
        for s in 1..=50u64 {
            if let Ok(pg) = pair_genus(r, s) {
                let sieve = NumericalSemigroup::new(&[r, s]).map_err(err)?.genus();
                ensure(pg == sieve, || format!("<{r},{s}>: {pg} vs {sieve}"))?;
            }
        }
    }
    // Selmer bound over its domain.
    let mut selmer = 0;
    for q in 2..=30u64 {
        for m in 2..=30u64 {
            if pair_genus(m, q).is_err() || 2 * m < q + 1 || m > q + 1 {
                continue;
            }
            let b = selmer_upper_bound(m, q).map_err(err)?;
            ensure(b.two_genus_bound >= b.two_genus_sieve as i64, || {
                format!("{b:?}")
            })?;
            selmer += 1;
        }
    }
    Ok(format!(
        "field, valuation, Riemann-Roch, pair genus, {selmer} Selmer cases"
    ))
}

fn determinism() -> Check {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_maxcurve"))
            .args(["audit", "--p", "5", "--a", "1", "--hermitian-m", "3"])
            .output()
            .map_err(err)
    };
    let a = run()?;
    let b = run()?;
    ensure(a.status.success() && b.status.success(), || {
        format!(
            "audit exited with {:?} / {:?}",
            a.status.code(),
            b.status.code()
        )
    })?;
    ensure(a.stdout == b.stdout, || "outputs differ".into())?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("maximality counts", maximality_counts),
        ("F_{q^4} counts", quartic_counts),
        ("Stöhr-Voloch accounting", stohr_voloch_accounting),
        ("order-sequence theorems", order_theorems),
        ("Frobenius equivalence witnesses", frobenius_equivalence),
        ("n·m_1 dichotomy", dichotomy),
        ("Castelnuovo and Lewittes bounds", bounds),
        ("Goppa codes", goppa_codes),
        ("property suites", property_suites),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
