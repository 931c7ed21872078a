//! Exact arithmetic in the function field k(X) = k(x, y).
//!
//! Functions are kept in reduced form `Σ c_ij x^i y^j` with `j < deg F`.
//! Valuations at affine points come from power series in the local
//! parameter `t = x - x(P)`; this works at every affine point because
//! `∂/∂y (F(y) - x^d) = a_0` never vanishes. Valuations at infinity are read
//! off the pole-order weights `i·deg F + j·d`, which are pairwise distinct on
//! reduced monomials.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{CurveModel, Point};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldTower, Level};
use crate::linalg;

/// Exponent pair `(i, j)` of the monomial `x^i y^j`.
pub type Monomial = (u32, u32);

/// A polynomial in `x, y` that is not necessarily reduced.
pub type BivariatePoly = BTreeMap<Monomial, FieldElement>;

/// A function in reduced form. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FuncElement {
    terms: BTreeMap<Monomial, FieldElement>,
}

impl FuncElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, FieldElement> {
        &self.terms
    }

    pub fn coeff(&self, m: Monomial) -> Option<FieldElement> {
        self.terms.get(&m).copied()
    }

    /// JSON-ready list of `{i, j, coeff}`.
    pub fn to_terms(&self, tower: &FieldTower) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(&(i, j), &c)| TermJson {
                i,
                j,
                coeff: tower.coeffs(c),
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub i: u32,
    pub j: u32,
    pub coeff: Vec<u32>,
}

/// `num / den`, never cleared into a single reduced form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub num: FuncElement,
    pub den: FuncElement,
}

/// A truncated power series in `t = x - x(P)` around an affine point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSeries {
    pub center: Point,
    pub coeffs: Vec<FieldElement>,
}

impl LocalSeries {
    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    /// Index of the first nonzero coefficient, `None` if the series vanishes
    /// to the working precision.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

/// Monomial basis of `L(λ P∞)`, sorted by pole order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RRBasis {
    pub lambda: u64,
    pub monomials: Vec<Monomial>,
    pub pole_orders: Vec<u64>,
}

impl RRBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }
}

/// Outcome of [`FunctionField::solve_section`].
#[derive(Clone, Debug)]
pub struct SectionResult {
    /// Rank of the constraint matrix.
    pub rank: usize,
    pub unknowns: usize,
    pub witness: Option<SectionWitness>,
}

/// A nonzero section together with its audited divisor.
#[derive(Clone, Debug)]
pub struct SectionWitness {
    pub f: FuncElement,
    /// Actual pole order at infinity (may be below λ).
    pub pole_order: u64,
    /// Zeros located among the F_{q^4}-points, with multiplicities.
    pub zeros: Vec<(Point, u64)>,
    /// True when the located zeros have total degree equal to the pole order.
    pub degree_balanced: bool,
}

impl SectionWitness {
    pub fn zero_degree(&self) -> u64 {
        self.zeros.iter().map(|(_, m)| m).sum()
    }

    pub fn order_at(&self, point: &Point) -> u64 {
        self.zeros
            .iter()
            .find(|(p, _)| p == point)
            .map_or(0, |(_, m)| *m)
    }
}

/// Truncated series arithmetic at a fixed precision.
struct SeriesRing<'t> {
    t: &'t FieldTower,
    n: usize,
}

impl SeriesRing<'_> {
    fn zero(&self) -> Vec<FieldElement> {
        vec![self.t.zero(); self.n]
    }

    fn constant(&self, c: FieldElement) -> Vec<FieldElement> {
        let mut s = self.zero();
        if self.n > 0 {
            s[0] = c;
        }
        s
    }

    fn add_assign(&self, acc: &mut [FieldElement], other: &[FieldElement]) {
        for (a, &b) in acc.iter_mut().zip(other) {
            *a = self.t.add(*a, b);
        }
    }

    fn scale(&self, s: &[FieldElement], c: FieldElement) -> Vec<FieldElement> {
        s.iter().map(|&v| self.t.mul(v, c)).collect()
    }

    fn mul(&self, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
        let mut out = self.zero();
        for (i, &ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, &bj) in b[..self.n - i].iter().enumerate() {
                if !bj.is_zero() {
                    out[i + j] = self.t.add(out[i + j], self.t.mul(ai, bj));
                }
            }
        }
        out
    }

    fn pow(&self, base: &[FieldElement], mut e: u64) -> Vec<FieldElement> {
        let mut result = self.constant(self.t.one());
        let mut b = base.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        result
    }

    /// `s^{p^k}` in characteristic p: raise coefficients and stretch.
    fn frobenius(&self, s: &[FieldElement], pk: u64) -> Vec<FieldElement> {
        let mut out = self.zero();
        for (i, &c) in s.iter().enumerate() {
            let pos = i as u64 * pk;
            if pos >= self.n as u64 {
                break;
            }
            out[pos as usize] = self.t.pow(c, pk);
        }
        out
    }
}

/// Cached expansions of `x^i` and `y^j` at one affine point.
pub struct LocalExpander<'c> {
    curve: &'c CurveModel,
    center: Point,
    n: usize,
    x_pows: Vec<Vec<FieldElement>>,
    y_pows: Vec<Vec<FieldElement>>,
}

impl<'c> LocalExpander<'c> {
    fn new(curve: &'c CurveModel, center: Point, n: usize) -> Result<Self> {
        let (x0, y0) = center.coords().ok_or_else(|| {
            Error::InvalidParameter("local expansions are taken at affine points".into())
        })?;
        if !curve.contains(&center) {
            return Err(Error::NotOnCurve);
        }
        let t = curve.tower();
        let ring = SeriesRing { t, n };
        let mut xs = ring.zero();
        if n > 0 {
            xs[0] = x0;
        }
        if n > 1 {
            xs[1] = t.one();
        }
        let u = y_increment(curve, x0, n);
        let mut ys = u;
        if n > 0 {
            ys[0] = t.add(ys[0], y0);
        }
        Ok(LocalExpander {
            curve,
            center,
            n,
            x_pows: vec![ring.constant(t.one()), xs],
            y_pows: vec![ring.constant(t.one()), ys],
        })
    }

    fn ring(&self) -> SeriesRing<'_> {
        SeriesRing {
            t: self.curve.tower(),
            n: self.n,
        }
    }

    fn ensure(&mut self, i: usize, j: usize) {
        while self.x_pows.len() <= i {
            let next = self
                .ring()
                .mul(self.x_pows.last().unwrap(), &self.x_pows[1]);
            self.x_pows.push(next);
        }
        while self.y_pows.len() <= j {
            let next = self
                .ring()
                .mul(self.y_pows.last().unwrap(), &self.y_pows[1]);
            self.y_pows.push(next);
        }
    }

    pub fn monomial(&mut self, (i, j): Monomial) -> Vec<FieldElement> {
        self.ensure(i as usize, j as usize);
        self.ring()
            .mul(&self.x_pows[i as usize], &self.y_pows[j as usize])
    }

    pub fn expand(&mut self, f: &FuncElement) -> LocalSeries {
        let mut acc = self.ring().zero();
        for (&m, &c) in &f.terms {
            let s = self.monomial(m);
            let scaled = self.ring().scale(&s, c);
            self.ring().add_assign(&mut acc, &scaled);
        }
        LocalSeries {
            center: self.center,
            coeffs: acc,
        }
    }
}

/// Series `u(t) = y - y(P)` solving `F(u) = (x(P)+t)^d - x(P)^d`.
///
/// Fixed point of `u ← a_0^{-1}(rhs - Σ_{i≥1} a_i u^{p^i})`; each round at
/// least multiplies the t-adic precision of the error by p.
fn y_increment(curve: &CurveModel, x0: FieldElement, n: usize) -> Vec<FieldElement> {
    let t = curve.tower();
    let ring = SeriesRing { t, n };
    if n == 0 {
        return Vec::new();
    }
    let mut xs = ring.zero();
    xs[0] = x0;
    if n > 1 {
        xs[1] = t.one();
    }
    let mut rhs = ring.pow(&xs, curve.d());
    rhs[0] = t.sub(rhs[0], t.pow(x0, curve.d()));
    let coeffs = curve.f_coeffs();
    let a0_inv = t.inv(coeffs[0]).expect("a_0 is nonzero");
    let p = t.p() as u64;
    let mut u = ring.zero();
    for _ in 0..=n {
        let mut next = rhs.clone();
        let mut pk = 1u64;
        for &a in &coeffs[1..] {
            pk *= p;
            if pk >= n as u64 {
                break;
            }
            let term = ring.scale(&ring.frobenius(&u, pk), t.neg(a));
            ring.add_assign(&mut next, &term);
        }
        let next = ring.scale(&next, a0_inv);
        if next == u {
            break;
        }
        u = next;
    }
    u
}

/// Function-field operations for one curve.
#[derive(Clone, Copy)]
pub struct FunctionField<'c> {
    curve: &'c CurveModel,
}

impl<'c> FunctionField<'c> {
    pub fn new(curve: &'c CurveModel) -> Self {
        FunctionField { curve }
    }

    pub fn curve(&self) -> &'c CurveModel {
        self.curve
    }

    fn tower(&self) -> &'c FieldTower {
        self.curve.tower()
    }

    /// Default series precision `4(q+1)`.
    pub fn default_precision(&self) -> usize {
        4 * (self.curve.q() as usize + 1)
    }

    /// Hard cap on precision escalation, `64(q+1)`.
    pub fn max_precision(&self) -> usize {
        64 * (self.curve.q() as usize + 1)
    }

    pub fn constant(&self, c: FieldElement) -> FuncElement {
        self.monomial_times((0, 0), c)
    }

    pub fn x(&self) -> FuncElement {
        self.monomial_times((1, 0), self.tower().one())
    }

    pub fn y(&self) -> FuncElement {
        self.normal_form(&BTreeMap::from([((0, 1), self.tower().one())]))
    }

    /// `c · x^i y^j` in reduced form.
    pub fn monomial_times(&self, m: Monomial, c: FieldElement) -> FuncElement {
        self.normal_form(&BTreeMap::from([(m, c)]))
    }

    /// Reduces `y`-degrees below `deg F` using
    /// `a_e y^{p^e} = x^d - Σ_{i<e} a_i y^{p^i}`.
    pub fn normal_form(&self, poly: &BivariatePoly) -> FuncElement {
        let t = self.tower();
        let r = self.curve.deg_f() as u32;
        let d = self.curve.d() as u32;
        let coeffs = self.curve.f_coeffs();
        let lead_inv = t
            .inv(*coeffs.last().unwrap())
            .expect("leading coefficient is nonzero");
        let p = t.p();

        // keyed by (j, i) so the highest y-degree comes last
        let mut work: BTreeMap<(u32, u32), FieldElement> = BTreeMap::new();
        let push = |work: &mut BTreeMap<(u32, u32), FieldElement>, key, c: FieldElement| {
            let e = work.entry(key).or_insert(FieldElement::ZERO);
            *e = t.add(*e, c);
            if e.is_zero() {
                work.remove(&key);
            }
        };
        for (&(i, j), &c) in poly {
            if !c.is_zero() {
                push(&mut work, (j, i), c);
            }
        }
        let mut done = BTreeMap::new();
        while let Some((&(j, i), &c)) = work.iter().next_back() {
            work.remove(&(j, i));
            if j < r {
                done.insert((i, j), c);
                // everything left has y-degree ≤ j < r
                for (&(j2, i2), &c2) in &work {
                    done.insert((i2, j2), c2);
                }
                work.clear();
                break;
            }
            let rest = j - r;
            let c = t.mul(c, lead_inv);
            push(&mut work, (rest, i + d), c);
            let mut pk = 1u32;
            for &a in &coeffs[..coeffs.len() - 1] {
                if !a.is_zero() {
                    push(&mut work, (rest + pk, i), t.neg(t.mul(c, a)));
                }
                pk *= p;
            }
        }
        FuncElement { terms: done }
    }

    pub fn add(&self, f: &FuncElement, g: &FuncElement) -> FuncElement {
        let t = self.tower();
        let mut terms = f.terms.clone();
        for (&m, &c) in &g.terms {
            let e = terms.entry(m).or_insert(FieldElement::ZERO);
            *e = t.add(*e, c);
            if e.is_zero() {
                terms.remove(&m);
            }
        }
        FuncElement { terms }
    }

    pub fn scale(&self, f: &FuncElement, c: FieldElement) -> FuncElement {
        if c.is_zero() {
            return FuncElement::zero();
        }
        let t = self.tower();
        FuncElement {
            terms: f.terms.iter().map(|(&m, &v)| (m, t.mul(v, c))).collect(),
        }
    }

    pub fn sub(&self, f: &FuncElement, g: &FuncElement) -> FuncElement {
        self.add(f, &self.scale(g, self.tower().neg(self.tower().one())))
    }

    pub fn mul(&self, f: &FuncElement, g: &FuncElement) -> FuncElement {
        let t = self.tower();
        let mut prod: BivariatePoly = BTreeMap::new();
        for (&(i1, j1), &c1) in &f.terms {
            for (&(i2, j2), &c2) in &g.terms {
                let e = prod.entry((i1 + i2, j1 + j2)).or_insert(FieldElement::ZERO);
                *e = t.add(*e, t.mul(c1, c2));
            }
        }
        self.normal_form(&prod)
    }

    pub fn pow(&self, f: &FuncElement, e: u32) -> FuncElement {
        let mut acc = self.constant(self.tower().one());
        for _ in 0..e {
            acc = self.mul(&acc, f);
        }
        acc
    }

    /// Value at an affine point.
    pub fn evaluate(&self, f: &FuncElement, point: &Point) -> Result<FieldElement> {
        let (x, y) = point.coords().ok_or_else(|| {
            Error::InvalidParameter("functions are evaluated at affine points".into())
        })?;
        let t = self.tower();
        Ok(t.sum(
            f.terms
                .iter()
                .map(|(&(i, j), &c)| t.mul(c, t.mul(t.pow(x, i as u64), t.pow(y, j as u64)))),
        ))
    }

    /// Pole-order weight `i·deg F + j·d` of a monomial.
    pub fn weight(&self, (i, j): Monomial) -> u64 {
        i as u64 * self.curve.deg_f() + j as u64 * self.curve.d()
    }

    pub fn valuation_at_infinity(&self, f: &FuncElement) -> Result<i64> {
        f.terms
            .keys()
            .map(|&m| self.weight(m))
            .max()
            .map(|w| -(w as i64))
            .ok_or(Error::ZeroFunction)
    }

    pub fn local_expansion(
        &self,
        point: &Point,
        f: &FuncElement,
        precision: usize,
    ) -> Result<LocalSeries> {
        let mut exp = LocalExpander::new(self.curve, *point, precision)?;
        Ok(exp.expand(f))
    }

    /// Expander for repeated expansions at one point.
    pub fn expander(&self, point: &Point, precision: usize) -> Result<LocalExpander<'c>> {
        LocalExpander::new(self.curve, *point, precision)
    }

    pub fn valuation_at(&self, point: &Point, f: &FuncElement) -> Result<i64> {
        if f.is_zero() {
            return Err(Error::ZeroFunction);
        }
        if point.is_infinity() {
            return self.valuation_at_infinity(f);
        }
        let mut n = self.default_precision();
        loop {
            if let Some(v) = self.local_expansion(point, f, n)?.valuation() {
                return Ok(v as i64);
            }
            if n >= self.max_precision() {
                return Err(Error::PrecisionExhausted { precision: n });
            }
            n = (2 * n).min(self.max_precision());
        }
    }

    pub fn quotient_valuation_at(&self, point: &Point, h: &Quotient) -> Result<i64> {
        Ok(self.valuation_at(point, &h.num)? - self.valuation_at(point, &h.den)?)
    }

    /// Monomials `x^i y^j` with `j < deg F` and weight at most `λ`.
    pub fn rr_basis(&self, lambda: u64) -> RRBasis {
        let r = self.curve.deg_f();
        let d = self.curve.d();
        let mut mons: Vec<(u64, Monomial)> = Vec::new();
        for j in 0..r {
            if j * d > lambda {
                break;
            }
            let max_i = (lambda - j * d) / r;
            for i in 0..=max_i {
                mons.push((i * r + j * d, (i as u32, j as u32)));
            }
        }
        mons.sort_unstable();
        RRBasis {
            lambda,
            pole_orders: mons.iter().map(|&(w, _)| w).collect(),
            monomials: mons.into_iter().map(|(_, m)| m).collect(),
        }
    }

    /// Finds a nonzero `f ∈ L(λ P∞)` with `v_{P_i}(f) ≥ order_i`, then audits
    /// its divisor against the F_{q^4}-points.
    pub fn solve_section(
        &self,
        lambda: u64,
        constraints: &[(Point, u64)],
    ) -> Result<SectionResult> {
        let basis = self.rr_basis(lambda);
        let k = basis.len();
        let mut rows: linalg::Matrix = Vec::new();
        for (point, order) in constraints {
            if point.is_infinity() {
                return Err(Error::InvalidParameter(
                    "constraint points must be affine".into(),
                ));
            }
            let order = *order as usize;
            if order == 0 {
                continue;
            }
            let mut exp = self.expander(point, order)?;
            let cols: Vec<Vec<FieldElement>> =
                basis.monomials.iter().map(|&m| exp.monomial(m)).collect();
            for s in 0..order {
                rows.push(cols.iter().map(|c| c[s]).collect());
            }
        }
        let (rank, kernel) = if rows.is_empty() {
            let mut v = vec![self.tower().zero(); k];
            v[0] = self.tower().one();
            (0, Some(v))
        } else {
            linalg::kernel_vector(self.tower(), &rows, k)
        };
        let witness = match kernel {
            None => None,
            Some(v) => {
                let mut terms = BTreeMap::new();
                for (&m, c) in basis.monomials.iter().zip(v) {
                    if !c.is_zero() {
                        terms.insert(m, c);
                    }
                }
                Some(self.audit_divisor(FuncElement { terms })?)
            }
        };
        Ok(SectionResult {
            rank,
            unknowns: k,
            witness,
        })
    }

    /// Locates the zeros of `f` among the F_{q^4}-points and compares their
    /// degree with the pole order at infinity.
    pub fn audit_divisor(&self, f: FuncElement) -> Result<SectionWitness> {
        let pole_order = (-self.valuation_at_infinity(&f)?) as u64;
        let points = self.curve.enumerate_points(Level::Fq4)?;
        let zeros: Vec<(Point, u64)> = points
            .par_iter()
            .filter(|p| !p.is_infinity())
            .filter_map(|p| match self.evaluate(&f, p) {
                Ok(v) if v.is_zero() => Some(self.valuation_at(p, &f).map(|m| (*p, m as u64))),
                Ok(_) => None,
                Err(e) => Some(Err(e)),
            })
            .collect::<Result<_>>()?;
        let degree: u64 = zeros.iter().map(|(_, m)| m).sum();
        Ok(SectionWitness {
            f,
            pole_order,
            zeros,
            degree_balanced: degree == pole_order,
        })
    }
}
