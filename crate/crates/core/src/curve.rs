//! Curves `F(y) = x^d` with `F` an additive polynomial over k = F_{q^2}.
//!
//! Since `F` is F_p-linear, solving `F(y) = c` on a level amounts to one
//! table lookup (a preimage) plus a translate of the kernel. The tables are
//! built lazily per level and shared by all point counts and enumerations.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldTower, Level};

/// Which family a curve belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    /// `y^q + y = x^m` with `m | q+1`.
    Hermitian {
        m: u64,
    },
    AdditiveGeneral,
}

/// A point of the curve over F_{q^4}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Point {
    Affine { x: FieldElement, y: FieldElement },
    Infinity,
}

impl Point {
    pub fn affine(x: FieldElement, y: FieldElement) -> Self {
        Point::Affine { x, y }
    }

    pub fn coords(&self) -> Option<(FieldElement, FieldElement)> {
        match *self {
            Point::Affine { x, y } => Some((x, y)),
            Point::Infinity => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }
}

/// Image and kernel of the additive map `F` restricted to one level.
#[derive(Debug)]
struct FiberTable {
    preimage: HashMap<FieldElement, FieldElement>,
    kernel: Vec<FieldElement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalityReport {
    pub count: u64,
    pub hasse_weil: u64,
    pub maximal: bool,
}

/// JSON summary of a curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveReport {
    pub family: String,
    pub p: u32,
    pub a: u32,
    pub m_or_d: u64,
    pub f_coeffs: Vec<Vec<u32>>,
    pub genus: u64,
    pub counts: CurveCounts,
    pub maximal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveCounts {
    pub fq2: u64,
    pub fq4: Option<u64>,
    pub hasse_weil: u64,
    pub predicted_fq4: u64,
}

pub struct CurveModel {
    tower: Arc<FieldTower>,
    coeffs: Vec<FieldElement>,
    d: u64,
    family: Family,
    genus: u64,
    fibers_k: OnceLock<FiberTable>,
    fibers_q4: OnceLock<FiberTable>,
}

impl std::fmt::Debug for CurveModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CurveModel")
            .field("p", &self.tower.p())
            .field("a", &self.tower.a())
            .field("family", &self.family)
            .field("deg_f", &self.deg_f())
            .field("d", &self.d)
            .field("genus", &self.genus)
            .finish()
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl CurveModel {
    /// The curve `H_{m,q}: y^q + y = x^m`.
    pub fn hermitian(tower: Arc<FieldTower>, m: u64) -> Result<Self> {
        let q = tower.q();
        if m == 0 || (q + 1) % m != 0 {
            return Err(Error::InvalidParameter(format!(
                "m must divide q+1 (m = {m}, q+1 = {})",
                q + 1
            )));
        }
        let mut coeffs = vec![tower.zero(); tower.a() as usize + 1];
        coeffs[0] = tower.one();
        coeffs[tower.a() as usize] = tower.one();
        Self::additive(tower, coeffs, m)
    }

    /// The curve `Σ a_i y^{p^i} = x^d`; `coeffs[i]` is `a_i`.
    ///
    /// The family tag is `Hermitian` exactly when `F = T^q + T` and `d | q+1`.
    pub fn additive(tower: Arc<FieldTower>, coeffs: Vec<FieldElement>, d: u64) -> Result<Self> {
        let p = tower.p() as u64;
        if d == 0 {
            return Err(Error::InvalidParameter("d must be positive".into()));
        }
        if gcd(d, p) != 1 {
            return Err(Error::InvalidParameter(format!(
                "gcd(d, p) must be 1 (d = {d}, p = {p})"
            )));
        }
        if coeffs.is_empty() || coeffs[0].is_zero() {
            return Err(Error::InvalidParameter("a_0 must be nonzero".into()));
        }
        if coeffs.last().is_some_and(|c| c.is_zero()) {
            return Err(Error::InvalidParameter(
                "leading coefficient must be nonzero".into(),
            ));
        }
        if let Some(bad) = coeffs.iter().position(|&c| !tower.contains(Level::Fq2, c)) {
            return Err(Error::InvalidParameter(format!(
                "coefficient a_{bad} is not in F_q2"
            )));
        }
        let e = coeffs.len() as u32 - 1;
        let deg_f = p.checked_pow(e).ok_or_else(|| {
            Error::InvalidParameter("additive polynomial degree overflows".into())
        })?;
        if deg_f > tower.cardinality(Level::Fq4) {
            return Err(Error::InvalidParameter(
                "additive polynomial degree too large".into(),
            ));
        }
        let q = tower.q();
        let is_trace = deg_f == q
            && coeffs[0] == tower.one()
            && *coeffs.last().unwrap() == tower.one()
            && coeffs[1..coeffs.len() - 1].iter().all(|c| c.is_zero());
        let family = if is_trace && (q + 1) % d == 0 {
            Family::Hermitian { m: d }
        } else {
            Family::AdditiveGeneral
        };
        let genus = (deg_f - 1) * (d - 1) / 2;
        Ok(CurveModel {
            tower,
            coeffs,
            d,
            family,
            genus,
            fibers_k: OnceLock::new(),
            fibers_q4: OnceLock::new(),
        })
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn tower_arc(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn q(&self) -> u64 {
        self.tower.q()
    }

    /// Coefficients `a_0, ..., a_e` of `F`.
    pub fn f_coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// `deg F = p^e`, which is also the pole order of `x` at infinity.
    pub fn deg_f(&self) -> u64 {
        (self.tower.p() as u64).pow(self.coeffs.len() as u32 - 1)
    }

    /// Exponent `d`, which is also the pole order of `y` at infinity.
    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    /// `F(y)`.
    pub fn eval_f(&self, y: FieldElement) -> FieldElement {
        let t = &self.tower;
        let p = t.p() as u64;
        let mut acc = t.zero();
        let mut power = y;
        for &c in &self.coeffs {
            acc = t.add(acc, t.mul(c, power));
            power = t.pow(power, p);
        }
        acc
    }

    pub fn contains(&self, point: &Point) -> bool {
        match point.coords() {
            None => true,
            Some((x, y)) => self.eval_f(y) == self.tower.pow(x, self.d),
        }
    }

    /// Smallest level containing both coordinates.
    pub fn point_level(&self, point: &Point) -> Level {
        match point.coords() {
            None => Level::Fq,
            Some((x, y)) => self
                .tower
                .subfield_level(x)
                .max(self.tower.subfield_level(y)),
        }
    }

    pub fn is_rational(&self, point: &Point) -> bool {
        self.point_level(point) <= Level::Fq2
    }

    /// The Frobenius relative to k: `(x, y) ↦ (x^{q^2}, y^{q^2})`.
    pub fn frobenius(&self, point: &Point) -> Point {
        match point.coords() {
            None => Point::Infinity,
            Some((x, y)) => Point::affine(self.tower.frobenius(x, 2), self.tower.frobenius(y, 2)),
        }
    }

    fn fiber_table(&self, level: Level) -> Result<&FiberTable> {
        let cell = match level {
            Level::Fq2 => &self.fibers_k,
            Level::Fq4 => &self.fibers_q4,
            Level::Fq => {
                return Err(Error::InvalidParameter(
                    "points are enumerated over F_q2 or F_q4".into(),
                ))
            }
        };
        Ok(cell.get_or_init(|| {
            let elems = self.tower.level_elements(level);
            let mut preimage = HashMap::with_capacity(elems.len());
            let mut kernel = Vec::new();
            for &y in &elems {
                let v = self.eval_f(y);
                if v.is_zero() {
                    kernel.push(y);
                }
                preimage.entry(v).or_insert(y);
            }
            kernel.sort_unstable();
            FiberTable { preimage, kernel }
        }))
    }

    /// Kernel of `F` on a level.
    pub fn kernel(&self, level: Level) -> Result<Vec<FieldElement>> {
        Ok(self.fiber_table(level)?.kernel.clone())
    }

    /// All `y` in `level` with `F(y) = c`, sorted.
    pub fn solve_fiber(&self, c: FieldElement, level: Level) -> Result<Vec<FieldElement>> {
        let table = self.fiber_table(level)?;
        let Some(&y0) = table.preimage.get(&c) else {
            return Ok(Vec::new());
        };
        let mut ys: Vec<FieldElement> = table
            .kernel
            .iter()
            .map(|&k| self.tower.add(y0, k))
            .collect();
        ys.sort_unstable();
        Ok(ys)
    }

    /// Points over `level`: affine points ordered by `x` then `y`, followed by
    /// the point at infinity.
    pub fn enumerate_points(&self, level: Level) -> Result<Vec<Point>> {
        let t = &self.tower;
        let mut out = Vec::new();
        for x in t.level_elements(level) {
            for y in self.solve_fiber(t.pow(x, self.d), level)? {
                out.push(Point::affine(x, y));
            }
        }
        out.push(Point::Infinity);
        Ok(out)
    }

    /// Number of points over `level`, without materialising them.
    pub fn count_points(&self, level: Level) -> Result<u64> {
        let t = &self.tower;
        let table = self.fiber_table(level)?;
        let fiber = table.kernel.len() as u64;
        let affine = t
            .level_elements(level)
            .into_iter()
            .filter(|&x| table.preimage.contains_key(&t.pow(x, self.d)))
            .count() as u64;
        Ok(affine * fiber + 1)
    }

    /// `q^2 + 2gq + 1`.
    pub fn hasse_weil_bound(&self) -> u64 {
        let q = self.q();
        q * q + 2 * self.genus * q + 1
    }

    /// Maximality over k, established by counting.
    pub fn is_maximal(&self) -> Result<MaximalityReport> {
        let count = self.count_points(Level::Fq2)?;
        let hasse_weil = self.hasse_weil_bound();
        Ok(MaximalityReport {
            count,
            hasse_weil,
            maximal: count == hasse_weil,
        })
    }

    /// Errors unless the curve is maximal over k.
    pub fn require_maximal(&self) -> Result<()> {
        let report = self.is_maximal()?;
        if report.maximal {
            Ok(())
        } else {
            Err(Error::NotMaximal {
                count: report.count,
                expected: report.hasse_weil,
            })
        }
    }

    /// Point count over F_{q^{2j}} predicted from all Frobenius eigenvalues
    /// being `-q`: `q^{2j} + 1 - 2g(-q)^j`.
    pub fn predicted_count(&self, j: u32) -> Result<i128> {
        if j == 0 {
            return Err(Error::InvalidParameter(
                "extension index must be at least 1".into(),
            ));
        }
        self.require_maximal()?;
        Ok(predicted_count_formula(self.q(), self.genus, j))
    }

    pub fn report(&self) -> Result<CurveReport> {
        let t = &self.tower;
        let maximality = self.is_maximal()?;
        let fq4 = Some(self.count_points(Level::Fq4)?);
        let predicted = predicted_count_formula(self.q(), self.genus, 2);
        Ok(CurveReport {
            family: match self.family {
                Family::Hermitian { .. } => "hermitian".into(),
                Family::AdditiveGeneral => "additive".into(),
            },
            p: t.p(),
            a: t.a(),
            m_or_d: self.d,
            f_coeffs: self.coeffs.iter().map(|&c| t.coeffs(c)).collect(),
            genus: self.genus,
            counts: CurveCounts {
                fq2: maximality.count,
                fq4,
                hasse_weil: maximality.hasse_weil,
                predicted_fq4: predicted.max(0) as u64,
            },
            maximal: maximality.maximal,
        })
    }

    /// CSV with columns `x,y,level`; coordinates as colon-joined residues.
    pub fn points_csv(&self, points: &[Point]) -> String {
        let t = &self.tower;
        let join = |e: FieldElement| {
            t.coeffs(e)
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(":")
        };
        let mut out = String::from("x,y,level\n");
        for pt in points {
            let level = self.point_level(pt);
            match pt.coords() {
                Some((x, y)) => writeln!(out, "{},{},{}", join(x), join(y), level),
                None => writeln!(out, "inf,inf,{level}"),
            }
            .expect("writing to a String");
        }
        out
    }
}

/// `q^{2j} + 1 - 2g(-q)^j`.
pub fn predicted_count_formula(q: u64, genus: u64, j: u32) -> i128 {
    let q = q as i128;
    let sign = if j % 2 == 0 { 1 } else { -1 };
    q.pow(2 * j) + 1 - 2 * genus as i128 * sign * q.pow(j)
}
