//! Numerical semigroups, order sequences of the linear system |(q+1)P∞|,
//! and the divisor accounting for the ramification divisor R and the
//! Frobenius divisor S.
//!
//! Orders at an affine point are the valuations attained on L((q+1)P∞).
//! They are read off as pivot columns after row-reducing the matrix of local
//! series coefficients of the monomial basis. At P∞ they are `q+1` minus the
//! pole orders of the basis.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{CurveModel, Family, Point};
use crate::error::{Error, Result};
use crate::field::Level;
use crate::function_field::FunctionField;
use crate::linalg;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A numerical semigroup given by generators, with its gaps tabulated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumericalSemigroup {
    pub generators: Vec<u64>,
    pub gaps: Vec<u64>,
    /// Smallest `c` with every integer `≥ c` in the semigroup.
    pub conductor: u64,
}

impl NumericalSemigroup {
    /// Sieves the semigroup until `min(generators)` consecutive members are
    /// found; everything missing before that run is a gap.
    pub fn new(generators: &[u64]) -> Result<Self> {
        let mut gens: Vec<u64> = generators.iter().copied().filter(|&g| g > 0).collect();
        gens.sort_unstable();
        gens.dedup();
        if gens.is_empty() {
            return Err(Error::InvalidParameter("no positive generators".into()));
        }
        let g = gens.iter().fold(0, |acc, &x| gcd(acc, x));
        if g != 1 {
            return Err(Error::InvalidParameter(format!(
                "generators have gcd {g}, the semigroup has infinitely many gaps"
            )));
        }
        let smallest = gens[0] as usize;
        let mut member = vec![true];
        let mut run = 1usize;
        let mut n = 0usize;
        while run < smallest {
            n += 1;
            let is_member = gens
                .iter()
                .any(|&gen| gen as usize <= n && member[n - gen as usize]);
            member.push(is_member);
            run = if is_member { run + 1 } else { 0 };
        }
        let gaps: Vec<u64> = member
            .iter()
            .enumerate()
            .filter(|(_, &m)| !m)
            .map(|(i, _)| i as u64)
            .collect();
        let conductor = gaps.last().map_or(0, |&l| l + 1);
        Ok(NumericalSemigroup {
            generators: gens,
            gaps,
            conductor,
        })
    }

    pub fn genus(&self) -> u64 {
        self.gaps.len() as u64
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= self.conductor || self.gaps.binary_search(&n).is_err()
    }

    /// Members in `[0, bound]`.
    pub fn nongaps_up_to(&self, bound: u64) -> Vec<u64> {
        (0..=bound).filter(|&n| self.contains(n)).collect()
    }

    /// The first `count` positive members `m_1 < m_2 < ...`.
    pub fn first_nongaps(&self, count: usize) -> Vec<u64> {
        (1..).filter(|&n| self.contains(n)).take(count).collect()
    }
}

/// Gap set and genus of the semigroup generated by `gens`.
pub fn semigroup_gaps(gens: &[u64]) -> Result<(Vec<u64>, u64)> {
    let s = NumericalSemigroup::new(gens)?;
    let g = s.genus();
    Ok((s.gaps, g))
}

/// Genus `(r-1)(s-1)/2` of `<r, s>`.
pub fn pair_genus(r: u64, s: u64) -> Result<u64> {
    if r == 0 || s == 0 || gcd(r, s) != 1 {
        return Err(Error::NotCoprime(r, s));
    }
    Ok((r - 1) * (s - 1) / 2)
}

/// Output of [`selmer_upper_bound`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelmerBound {
    pub m: u64,
    pub q: u64,
    pub s: u64,
    pub t: u64,
    pub u: u64,
    pub r: u64,
    /// `(m-1)(q-1) - u·t·(m-s+r)`, an upper bound on `2g(<m,q,q+1>)`.
    pub two_genus_bound: i64,
    /// `2g(<m,q,q+1>)` from the sieve.
    pub two_genus_sieve: u64,
    /// True when the search had to use `s = m`.
    pub s_equals_m: bool,
}

impl SelmerBound {
    pub fn is_exact(&self) -> bool {
        self.two_genus_bound == self.two_genus_sieve as i64
    }
}

/// Upper bound on twice the genus of `<m, q, q+1>`.
///
/// Finds the smallest `s` with `1 < s ≤ m` and `t > 0` such that
/// `q+1 = s·q - t·m`, writes `m = u·s + r`, and evaluates
/// `(m-1)(q-1) - u·t·(m-s+r)`. The result is checked against the sieve.
pub fn selmer_upper_bound(m: u64, q: u64) -> Result<SelmerBound> {
    if m < 2 || q < 2 {
        return Err(Error::InvalidParameter(format!(
            "need m, q ≥ 2 (m = {m}, q = {q})"
        )));
    }
    if gcd(m, q) != 1 {
        return Err(Error::NotCoprime(m, q));
    }
    if 2 * m < q + 1 || m > q + 1 {
        return Err(Error::InvalidParameter(format!(
            "need (q+1)/2 ≤ m ≤ q+1 (m = {m}, q = {q})"
        )));
    }
    let (s, t) = (2..=m)
        .find_map(|s| {
            let lhs = s * q;
            (lhs > q + 1 && (lhs - q - 1) % m == 0).then(|| (s, (lhs - q - 1) / m))
        })
        .ok_or(Error::NoSelmerPair { m, q })?;
    let u = m / s;
    let r = m % s;
    let bound = ((m - 1) * (q - 1)) as i64 - (u * t * (m - s + r)) as i64;
    let sieve = 2 * NumericalSemigroup::new(&[m, q, q + 1])?.genus();
    if bound < sieve as i64 {
        return Err(Error::BoundViolated(format!(
            "Selmer bound {bound} below sieve value {sieve} for m = {m}, q = {q}"
        )));
    }
    Ok(SelmerBound {
        m,
        q,
        s,
        t,
        u,
        r,
        two_genus_bound: bound,
        two_genus_sieve: sieve,
        s_equals_m: s == m,
    })
}

/// Semigroup `<deg F, d>` of pole orders at P∞.
pub fn semigroup_at_infinity(curve: &CurveModel) -> Result<NumericalSemigroup> {
    NumericalSemigroup::new(&[curve.deg_f(), curve.d()])
}

/// First `count` non-gaps at P∞.
pub fn nongaps_at_infinity(curve: &CurveModel, count: usize) -> Result<Vec<u64>> {
    Ok(semigroup_at_infinity(curve)?.first_nongaps(count))
}

/// Position of a point relative to the degree-`d` map `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    /// Rational and totally ramified for `y` (`x = 0` or P∞).
    RamifiedRational,
    UnramifiedRational,
    NonRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderSequence {
    pub point: Point,
    pub orders: Vec<u64>,
    pub kind: PointKind,
}

pub fn point_kind(curve: &CurveModel, point: &Point) -> PointKind {
    if !curve.is_rational(point) {
        return PointKind::NonRational;
    }
    match point.coords() {
        None => PointKind::RamifiedRational,
        Some((x, _)) if x.is_zero() => PointKind::RamifiedRational,
        Some(_) => PointKind::UnramifiedRational,
    }
}

/// The (D, P)-orders of `D = |(q+1)P∞|` at `point`.
pub fn order_sequence(curve: &CurveModel, point: &Point) -> Result<OrderSequence> {
    let ff = FunctionField::new(curve);
    let q = curve.q();
    let basis = ff.rr_basis(q + 1);
    let kind = point_kind(curve, point);
    if point.is_infinity() {
        let mut orders: Vec<u64> = basis.pole_orders.iter().map(|&w| q + 1 - w).collect();
        orders.sort_unstable();
        return Ok(OrderSequence {
            point: *point,
            orders,
            kind,
        });
    }
    let mut n = ff.default_precision();
    loop {
        let mut exp = ff.expander(point, n)?;
        let mut rows: linalg::Matrix = basis.monomials.iter().map(|&m| exp.monomial(m)).collect();
        let pivots = linalg::rref(curve.tower(), &mut rows);
        if pivots.len() == basis.len() {
            let orders = pivots.into_iter().map(|c| c as u64).collect();
            return Ok(OrderSequence {
                point: *point,
                orders,
                kind,
            });
        }
        if n >= ff.max_precision() {
            return Err(Error::PrecisionExhausted { precision: n });
        }
        n = (2 * n).min(ff.max_precision());
    }
}

/// Generic data of the linear system `g^{n+1}_{q+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSystemInfo {
    pub n: u64,
    pub degree: u64,
    pub genus: u64,
    /// Generic orders `(0, 1, ..., n, q)`.
    pub epsilon: Vec<u64>,
    /// Frobenius orders `(0, 1, ..., n-1, q)`.
    pub nu: Vec<u64>,
    #[serde(rename = "degR")]
    pub deg_r: i64,
    #[serde(rename = "degS")]
    pub deg_s: i64,
}

pub fn linear_system_info(curve: &CurveModel) -> Result<LinearSystemInfo> {
    curve.require_maximal()?;
    let q = curve.q();
    let dim = FunctionField::new(curve).rr_basis(q + 1).len() as u64;
    if dim < 3 {
        return Err(Error::InvalidParameter(format!(
            "need n ≥ 1, but dim L((q+1)P∞) = {dim}"
        )));
    }
    let n = dim - 2;
    let g = curve.genus() as i64;
    let epsilon: Vec<u64> = (0..=n).chain(std::iter::once(q)).collect();
    let nu: Vec<u64> = (0..n).chain(std::iter::once(q)).collect();
    let r = n as i64 + 1;
    let d = q as i64 + 1;
    let eps_sum: i64 = epsilon[1..].iter().map(|&e| e as i64).sum();
    let nu_sum: i64 = nu[1..].iter().map(|&e| e as i64).sum();
    let deg_r = eps_sum * (2 * g - 2) + (r + 1) * d;
    let q2 = (q * q) as i64;
    let deg_s = nu_sum * (2 * g - 2) + (q2 + r) * d;
    Ok(LinearSystemInfo {
        n,
        degree: q + 1,
        genus: curve.genus(),
        epsilon,
        nu,
        deg_r,
        deg_s,
    })
}

/// Σ_{i≥1} (j_i - ε_i).
pub fn r_weight(orders: &[u64], epsilon: &[u64]) -> i64 {
    orders
        .iter()
        .zip(epsilon)
        .skip(1)
        .map(|(&j, &e)| j as i64 - e as i64)
        .sum()
}

/// Σ_{i=1}^{r} (j_i - ν_{i-1}).
pub fn s_weight(orders: &[u64], nu: &[u64]) -> i64 {
    orders
        .iter()
        .skip(1)
        .zip(nu)
        .map(|(&j, &v)| j as i64 - v as i64)
        .sum()
}

/// How much of the non-rational point set an audit covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Sampling {
    Complete,
    Sampled { count: usize, seed: u64 },
}

impl Sampling {
    /// Every point when `q ≤ 5`, otherwise 1000 seeded samples.
    pub fn default_for(q: u64, seed: u64) -> Self {
        if q <= 5 {
            Sampling::Complete
        } else {
            Sampling::Sampled { count: 1000, seed }
        }
    }

    fn select(&self, mut points: Vec<Point>) -> Vec<Point> {
        match *self {
            Sampling::Complete => points,
            Sampling::Sampled { count, seed } => {
                if points.len() <= count {
                    return points;
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                points.shuffle(&mut rng);
                points.truncate(count);
                points.sort_unstable();
                points
            }
        }
    }
}

/// Order sequences of every F_{q^4}-point covered by `sampling` (rational
/// points are always included), in enumeration order.
pub fn order_census(curve: &CurveModel, sampling: Sampling) -> Result<Vec<OrderSequence>> {
    let all = curve.enumerate_points(Level::Fq4)?;
    let (rational, non_rational): (Vec<Point>, Vec<Point>) =
        all.into_iter().partition(|p| curve.is_rational(p));
    let mut chosen = rational;
    chosen.extend(sampling.select(non_rational));
    chosen
        .par_iter()
        .map(|p| order_sequence(curve, p))
        .collect()
}

/// Checks of the order-sequence theorems over a census.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderTheoremReport {
    pub points_checked: usize,
    pub rational_checked: usize,
    pub non_rational_checked: usize,
    pub sampling: Sampling,
    /// `j_1(P) = 1` everywhere.
    pub j1_is_one: bool,
    /// `j_{n+1}(P) = q+1` on rational points and `q` elsewhere.
    pub top_order_matches_rationality: bool,
    /// `ε_i ≤ j_i(P)` for all i.
    pub epsilon_below_orders: bool,
    /// `ν_i ≤ j_{i+1}(P) - j_1(P)` for all i at rational points.
    pub nu_below_order_gaps: bool,
    /// The points with non-generic orders are exactly the rational ones.
    pub weierstrass_points_are_rational: bool,
    /// Distinct order sequences and how often each occurs, per point kind.
    pub census: BTreeMap<String, usize>,
    pub exceptions: Vec<String>,
}

impl OrderTheoremReport {
    pub fn all_hold(&self) -> bool {
        self.j1_is_one
            && self.top_order_matches_rationality
            && self.epsilon_below_orders
            && self.nu_below_order_gaps
            && self.weierstrass_points_are_rational
    }
}

fn census_key(seq: &OrderSequence) -> String {
    let kind = match seq.kind {
        PointKind::RamifiedRational => "ramified_rational",
        PointKind::UnramifiedRational => "unramified_rational",
        PointKind::NonRational => "non_rational",
    };
    let orders: Vec<String> = seq.orders.iter().map(|o| o.to_string()).collect();
    format!("{kind}:({})", orders.join(","))
}

pub fn order_theorem_audit(curve: &CurveModel, sampling: Sampling) -> Result<OrderTheoremReport> {
    let info = linear_system_info(curve)?;
    let q = curve.q();
    let seqs = order_census(curve, sampling)?;
    let n = info.n as usize;
    let mut report = OrderTheoremReport {
        points_checked: seqs.len(),
        rational_checked: 0,
        non_rational_checked: 0,
        sampling,
        j1_is_one: true,
        top_order_matches_rationality: true,
        epsilon_below_orders: true,
        nu_below_order_gaps: true,
        weierstrass_points_are_rational: true,
        census: BTreeMap::new(),
        exceptions: Vec::new(),
    };
    for seq in &seqs {
        let rational = seq.kind != PointKind::NonRational;
        if rational {
            report.rational_checked += 1;
        } else {
            report.non_rational_checked += 1;
        }
        *report.census.entry(census_key(seq)).or_default() += 1;
        let j = &seq.orders;
        let mut fail = |flag: &mut bool, what: &str| {
            *flag = false;
            report
                .exceptions
                .push(format!("{what} at {:?}: orders {:?}", seq.point, j));
        };
        if j.len() != n + 2 {
            let mut f = true;
            fail(&mut f, "wrong number of orders");
            report.j1_is_one = false;
            continue;
        }
        if j[1] != 1 {
            let mut f = report.j1_is_one;
            fail(&mut f, "j_1 != 1");
            report.j1_is_one = f;
        }
        let expected_top = if rational { q + 1 } else { q };
        if j[n + 1] != expected_top {
            let mut f = report.top_order_matches_rationality;
            fail(&mut f, "top order");
            report.top_order_matches_rationality = f;
        }
        if j.iter().zip(&info.epsilon).any(|(&ji, &ei)| ei > ji) {
            let mut f = report.epsilon_below_orders;
            fail(&mut f, "epsilon_i > j_i");
            report.epsilon_below_orders = f;
        }
        if rational
            && info
                .nu
                .iter()
                .enumerate()
                .any(|(i, &nu)| nu + j[1] > j[i + 1])
        {
            let mut f = report.nu_below_order_gaps;
            fail(&mut f, "nu_i > j_{i+1} - j_1");
            report.nu_below_order_gaps = f;
        }
        let generic = *j == info.epsilon;
        if generic == rational {
            let mut f = report.weierstrass_points_are_rational;
            fail(&mut f, "Weierstrass point set");
            report.weierstrass_points_are_rational = f;
        }
    }
    Ok(report)
}

/// Per-identity outcome of the ramification audit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationChecks {
    /// `T1 = q+1`.
    pub t1_is_q_plus_1: bool,
    /// `2g - 2 = -2m + (m-1)·T1`.
    pub riemann_hurwitz: bool,
    /// `w1·T1 + w2·T2 = deg R`.
    pub deg_r_accounting: bool,
    /// Each rational point has the order shape and R-weight of its type.
    pub per_point_weights: bool,
    /// Σ over rational points of Σ (j_i - ν_{i-1}) equals deg S.
    pub deg_s_accounting: bool,
    /// Every checked non-rational point has generic orders.
    pub weierstrass_points_are_rational: bool,
    /// q² - q unramified fibres of `y` over k, each of m rational points.
    pub unramified_fibers_rational: bool,
}

impl RamificationChecks {
    pub fn all(&self) -> bool {
        self.t1_is_q_plus_1
            && self.riemann_hurwitz
            && self.deg_r_accounting
            && self.per_point_weights
            && self.deg_s_accounting
            && self.weierstrass_points_are_rational
            && self.unramified_fibers_rational
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationReport {
    #[serde(rename = "T1")]
    pub t1: u64,
    #[serde(rename = "T2")]
    pub t2: u64,
    pub w1: i64,
    pub w2: i64,
    #[serde(rename = "degR")]
    pub deg_r: i64,
    #[serde(rename = "degS")]
    pub deg_s: i64,
    /// w1·T1 + w2·T2.
    pub r_weight_total: i64,
    /// Σ of per-point S-weights over X(k).
    pub s_weight_total: i64,
    pub type_i_orders: Vec<u64>,
    pub type_ii_orders: Vec<u64>,
    pub unramified_fibers: u64,
    pub non_rational_checked: usize,
    pub sampling: Sampling,
    pub census: BTreeMap<String, usize>,
    pub checks: RamificationChecks,
    pub all_identities: bool,
    pub failures: Vec<String>,
}

/// Stöhr-Voloch accounting on `H_{m,q}` with `n·m = q+1`, `n ≥ 2`.
pub fn ramification_audit(curve: &CurveModel, sampling: Sampling) -> Result<RamificationReport> {
    let Family::Hermitian { m } = curve.family() else {
        return Err(Error::InvalidParameter(
            "ramification audit needs a curve y^q + y = x^m".into(),
        ));
    };
    let q = curve.q();
    let info = linear_system_info(curve)?;
    let n = info.n;
    if n * m != q + 1 || n < 2 {
        return Err(Error::InvalidParameter(format!(
            "ramification audit needs n·m = q+1 and n ≥ 2 (n = {n}, m = {m}, q = {q})"
        )));
    }
    let g = curve.genus() as i64;
    let (mi, ni) = (m as i64, n as i64);
    let w1 = ni * ((ni - 1) * mi - ni - 1) / 2 + 2;
    let w2 = 1i64;
    let type_i: Vec<u64> = [0, 1]
        .into_iter()
        .chain((1..n).map(|k| k * m))
        .chain([q + 1])
        .collect();
    let type_ii: Vec<u64> = (0..=n).chain([q + 1]).collect();

    let seqs = order_census(curve, sampling)?;
    let mut failures = Vec::new();
    let mut t1 = 0u64;
    let mut t2 = 0u64;
    let mut per_point = true;
    let mut s_total = 0i64;
    let mut non_rational_ok = true;
    let mut non_rational_checked = 0usize;
    let mut census: BTreeMap<String, usize> = BTreeMap::new();
    for seq in &seqs {
        *census.entry(census_key(seq)).or_default() += 1;
        match seq.kind {
            PointKind::RamifiedRational | PointKind::UnramifiedRational => {
                let (shape, w) = if seq.kind == PointKind::RamifiedRational {
                    t1 += 1;
                    (&type_i, w1)
                } else {
                    t2 += 1;
                    (&type_ii, w2)
                };
                let weight = r_weight(&seq.orders, &info.epsilon);
                if seq.orders != *shape || weight != w {
                    per_point = false;
                    failures.push(format!(
                        "{:?}: orders {:?} (weight {weight}), expected {:?} (weight {w})",
                        seq.point, seq.orders, shape
                    ));
                }
                s_total += s_weight(&seq.orders, &info.nu);
            }
            PointKind::NonRational => {
                non_rational_checked += 1;
                if seq.orders != info.epsilon {
                    non_rational_ok = false;
                    failures.push(format!(
                        "{:?}: non-rational point with orders {:?}",
                        seq.point, seq.orders
                    ));
                }
            }
        }
    }

    // Fibres of y over k: y = c meets x^m = F(c).
    let t = curve.tower();
    let rational_pts = curve.enumerate_points(Level::Fq2)?;
    let mut fiber_sizes: BTreeMap<_, u64> = BTreeMap::new();
    for p in &rational_pts {
        if let Some((_, y)) = p.coords() {
            *fiber_sizes.entry(y).or_default() += 1;
        }
    }
    let mut unramified = 0u64;
    let mut fibers_ok = true;
    for c in t.level_elements(Level::Fq2) {
        if curve.eval_f(c).is_zero() {
            continue;
        }
        unramified += 1;
        let size = fiber_sizes.get(&c).copied().unwrap_or(0);
        if size != m {
            fibers_ok = false;
            failures.push(format!(
                "fibre y = {:?} has {size} rational points",
                t.coeffs(c)
            ));
        }
    }
    fibers_ok &= unramified == q * q - q;

    let r_total = w1 * t1 as i64 + w2 * t2 as i64;
    let checks = RamificationChecks {
        t1_is_q_plus_1: t1 == q + 1,
        riemann_hurwitz: 2 * g - 2 == -2 * mi + (mi - 1) * t1 as i64,
        deg_r_accounting: r_total == info.deg_r,
        per_point_weights: per_point,
        deg_s_accounting: s_total == info.deg_s,
        weierstrass_points_are_rational: non_rational_ok,
        unramified_fibers_rational: fibers_ok,
    };
    let all_identities = checks.all();
    Ok(RamificationReport {
        t1,
        t2,
        w1,
        w2,
        deg_r: info.deg_r,
        deg_s: info.deg_s,
        r_weight_total: r_total,
        s_weight_total: s_total,
        type_i_orders: type_i,
        type_ii_orders: type_ii,
        unramified_fibers: unramified,
        non_rational_checked,
        sampling,
        census,
        checks,
        all_identities,
        failures,
    })
}

/// CSV of order sequences: `point,orders,type`.
pub fn orders_csv(curve: &CurveModel, seqs: &[OrderSequence]) -> String {
    let t = curve.tower();
    let join = |e| {
        t.coeffs(e)
            .iter()
            .map(|c: &u32| c.to_string())
            .collect::<Vec<_>>()
            .join(":")
    };
    let mut out = String::from("point,orders,type\n");
    for s in seqs {
        let pt = match s.point.coords() {
            Some((x, y)) => format!("({} {})", join(x), join(y)),
            None => "inf".to_string(),
        };
        let orders: Vec<String> = s.orders.iter().map(|o| o.to_string()).collect();
        let kind = match s.kind {
            PointKind::RamifiedRational => "ramified_rational",
            PointKind::UnramifiedRational => "unramified_rational",
            PointKind::NonRational => "non_rational",
        };
        out.push_str(&format!("{pt},{},{kind}\n", orders.join(" ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldTower;
    use std::sync::Arc;

    fn curve_h(p: u32, m: u64) -> CurveModel {
        CurveModel::hermitian(Arc::new(FieldTower::new(p, 1).unwrap()), m).unwrap()
    }

    // Independent oracle: enumerate sums of generators directly.
    fn brute_gaps(gens: &[u64], limit: u64) -> Vec<u64> {
        let mut reach = vec![false; limit as usize + 1];
        reach[0] = true;
        for n in 1..=limit as usize {
            reach[n] = gens
                .iter()
                .any(|&g| g as usize <= n && reach[n - g as usize]);
        }
        (0..=limit).filter(|&n| !reach[n as usize]).collect()
    }

    #[test]
    fn semigroup_examples() {
        assert_eq!(semigroup_gaps(&[2, 3]).unwrap(), (vec![1], 1));
        assert_eq!(semigroup_gaps(&[3, 5]).unwrap(), (vec![1, 2, 4, 7], 4));
        assert_eq!(semigroup_gaps(&[4, 5, 6]).unwrap(), (vec![1, 2, 3, 7], 4));
        assert_eq!(brute_gaps(&[4, 5, 6], 200), vec![1, 2, 3, 7]);
        assert!(semigroup_gaps(&[4, 6]).is_err());
        assert_eq!(semigroup_gaps(&[1]).unwrap(), (vec![], 0));
    }

    #[test]
    fn pair_genus_examples_and_sieve() {
        assert_eq!(pair_genus(3, 5).unwrap(), 4);
        assert_eq!(pair_genus(2, 3).unwrap(), 1);
        assert_eq!(pair_genus(4, 7).unwrap(), 9);
        assert_eq!(brute_gaps(&[4, 7], 100).len(), 9);
        assert!(matches!(pair_genus(4, 6), Err(Error::NotCoprime(4, 6))));
    }

    #[test]
    fn selmer_examples() {
        let b = selmer_upper_bound(4, 5).unwrap();
        assert_eq!((b.two_genus_bound, b.two_genus_sieve), (8, 8));
        let b = selmer_upper_bound(4, 7).unwrap();
        assert_eq!((b.two_genus_bound, b.two_genus_sieve), (18, 18));
        assert!(b.s_equals_m);
        let b = selmer_upper_bound(5, 7).unwrap();
        assert_eq!((b.two_genus_bound, b.two_genus_sieve), (16, 14));
        assert!(!b.is_exact());
        assert_eq!(2 * brute_gaps(&[5, 7, 8], 200).len() as u64, 14);
        assert!(selmer_upper_bound(4, 6).is_err());
        assert!(selmer_upper_bound(2, 7).is_err());
    }

    #[test]
    fn nongaps_examples() {
        assert_eq!(
            nongaps_at_infinity(&curve_h(5, 3), 6).unwrap(),
            vec![3, 5, 6, 8, 9, 10]
        );
        assert_eq!(
            nongaps_at_infinity(&curve_h(3, 4), 5).unwrap(),
            vec![3, 4, 6, 7, 8]
        );
        let t = Arc::new(FieldTower::new(2, 2).unwrap());
        let c = CurveModel::additive(t.clone(), vec![t.one(), t.one()], 5).unwrap();
        assert_eq!(nongaps_at_infinity(&c, 3).unwrap(), vec![2, 4, 5]);
    }

    #[test]
    fn order_sequences_on_h35() {
        let c = curve_h(5, 3);
        let t = c.tower();
        let origin = Point::affine(t.zero(), t.zero());
        assert_eq!(
            order_sequence(&c, &origin).unwrap().orders,
            vec![0, 1, 3, 6]
        );
        assert_eq!(
            order_sequence(&c, &Point::Infinity).unwrap().orders,
            vec![0, 1, 3, 6]
        );
        let pts = c.enumerate_points(Level::Fq4).unwrap();
        let unram = pts
            .iter()
            .find(|p| c.is_rational(p) && p.coords().is_some_and(|(x, _)| !x.is_zero()))
            .unwrap();
        let s = order_sequence(&c, unram).unwrap();
        assert_eq!(s.orders, vec![0, 1, 2, 6]);
        assert_eq!(s.kind, PointKind::UnramifiedRational);
        let nonrat = pts.iter().find(|p| !c.is_rational(p)).unwrap();
        assert_eq!(order_sequence(&c, nonrat).unwrap().orders, vec![0, 1, 2, 5]);
    }

    #[test]
    fn linear_system_examples() {
        let info = linear_system_info(&curve_h(5, 3)).unwrap();
        assert_eq!(info.n, 2);
        assert_eq!(info.epsilon, vec![0, 1, 2, 5]);
        assert_eq!(info.nu, vec![0, 1, 5]);
        assert_eq!((info.deg_r, info.deg_s), (72, 204));
        let info = linear_system_info(&curve_h(3, 2)).unwrap();
        assert_eq!(info.n, 2);
        assert_eq!(info.epsilon, vec![0, 1, 2, 3]);
        assert_eq!((info.deg_r, info.deg_s), (16, 48));
        let info = linear_system_info(&curve_h(5, 2)).unwrap();
        assert_eq!(info.n, 3);
        assert_eq!(info.epsilon, vec![0, 1, 2, 3, 5]);
    }

    #[test]
    fn ramification_h35() {
        let r = ramification_audit(&curve_h(5, 3), Sampling::Complete).unwrap();
        assert_eq!((r.t1, r.t2, r.w1, r.w2), (6, 60, 2, 1));
        assert_eq!((r.deg_r, r.r_weight_total), (72, 72));
        assert_eq!((r.deg_s, r.s_weight_total), (204, 204));
        assert!(r.all_identities, "{:?}", r.failures);
    }

    #[test]
    fn ramification_h23() {
        let r = ramification_audit(&curve_h(3, 2), Sampling::Complete).unwrap();
        assert_eq!((r.t1, r.t2, r.w1, r.w2), (4, 12, 1, 1));
        assert_eq!(r.deg_r, 16);
        assert!(r.checks.riemann_hurwitz);
        assert!(r.all_identities, "{:?}", r.failures);
    }

    #[test]
    fn ramification_rejects_n_one() {
        // Hermitian curve: n = 1.
        assert!(ramification_audit(&curve_h(3, 4), Sampling::Complete).is_err());
    }

    #[test]
    fn order_theorems_hold() {
        for (p, m) in [(3u32, 2u64), (5, 3), (5, 2), (2, 3)] {
            let c = curve_h(p, m);
            let r = order_theorem_audit(&c, Sampling::Complete).unwrap();
            assert!(r.all_hold(), "{c:?}: {:?}", r.exceptions);
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let c = curve_h(5, 3);
        let s = Sampling::Sampled { count: 20, seed: 3 };
        let a = order_census(&c, s).unwrap();
        let b = order_census(&c, s).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            a.iter()
                .filter(|s| s.kind == PointKind::NonRational)
                .count(),
            20
        );
    }
}
