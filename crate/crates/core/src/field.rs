//! Arithmetic in the tower F_p ⊂ F_q ⊂ F_{q^2} ⊂ F_{q^4}.
//!
//! Everything lives inside one ambient field F_{p^{4a}} = F_{q^4}. The
//! subfields are the fixed points of the corresponding Frobenius powers, so
//! no embeddings between different representations are ever needed.
//!
//! Elements are stored as an index into the ambient field: the coefficient
//! tuple `(c_0, ..., c_{4a-1})` of the polynomial representative read as a
//! base-p number with `c_0` as the most significant digit. With that
//! encoding the integer order on indices is the lexicographic order on
//! coefficient tuples. Multiplication and addition go through log, antilog
//! and Zech tables built once per tower.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the ambient field size. Tables take 12 bytes per element.
pub const DEFAULT_FIELD_BUDGET: u64 = 1 << 20;

/// A subfield level of the tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Level {
    #[serde(rename = "F_q")]
    Fq,
    #[serde(rename = "F_q2")]
    Fq2,
    #[serde(rename = "F_q4")]
    Fq4,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Fq, Level::Fq2, Level::Fq4];

    /// Extension degree over F_q.
    pub fn degree_over_fq(self) -> u32 {
        match self {
            Level::Fq => 1,
            Level::Fq2 => 2,
            Level::Fq4 => 4,
        }
    }
}

impl std::fmt::Display for Level {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Level::Fq => "F_q",
            Level::Fq2 => "F_q2",
            Level::Fq4 => "F_q4",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "F_q" | "fq" | "q" => Ok(Level::Fq),
            "F_q2" | "fq2" | "q2" => Ok(Level::Fq2),
            "F_q4" | "fq4" | "q4" => Ok(Level::Fq4),
            other => Err(Error::InvalidParameter(format!("unknown level `{other}`"))),
        }
    }
}

/// An element of the ambient field, identified by its lexicographic index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

const NO_LOG: u32 = u32::MAX;

/// The field tower for a fixed `(p, a)`. Immutable after construction.
#[derive(Clone)]
pub struct FieldTower {
    p: u32,
    a: u32,
    q: u64,
    degree: usize,
    size: u32,
    modulus: Vec<u32>,
    /// Index of the element `1`, i.e. `p^{degree-1}`.
    one: u32,
    generator: FieldElement,
    xi: FieldElement,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

impl std::fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldTower")
            .field("p", &self.p)
            .field("a", &self.a)
            .field("modulus", &self.modulus)
            .field("xi", &self.coeffs(self.xi))
            .finish()
    }
}

/// JSON view of a tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerReport {
    pub p: u32,
    pub a: u32,
    pub modulus: Vec<u32>,
    pub xi: Vec<u32>,
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u32;
    while (i as u64) * (i as u64) <= n as u64 {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) works.
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// Dense polynomials over F_p, little-endian, used only while building the
/// tower (irreducibility test and the initial multiplication tables).
mod fp_poly {
    use super::inv_mod;

    pub fn trim(mut f: Vec<u32>) -> Vec<u32> {
        while f.last() == Some(&0) {
            f.pop();
        }
        f
    }

    pub fn sub(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
        let n = f.len().max(g.len());
        let out = (0..n)
            .map(|i| {
                let a = f.get(i).copied().unwrap_or(0);
                let b = g.get(i).copied().unwrap_or(0);
                (a + p - b) % p
            })
            .collect();
        trim(out)
    }

    pub fn mul(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
        if f.is_empty() || g.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; f.len() + g.len() - 1];
        for (i, &a) in f.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in g.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u64 * b as u64) % p as u64;
            }
        }
        trim(out.into_iter().map(|c| c as u32).collect())
    }

    pub fn rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
        let g = trim(g.to_vec());
        let mut r = trim(f.to_vec());
        let lead_inv = inv_mod(*g.last().expect("nonzero divisor"), p) as u64;
        while r.len() >= g.len() {
            let shift = r.len() - g.len();
            let c = *r.last().unwrap() as u64 * lead_inv % p as u64;
            for (i, &b) in g.iter().enumerate() {
                let t = (r[shift + i] as u64 + p as u64 - c * b as u64 % p as u64) % p as u64;
                r[shift + i] = t as u32;
            }
            r = trim(r);
        }
        r
    }

    pub fn gcd(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
        let mut a = trim(f.to_vec());
        let mut b = trim(g.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn pow_mod(base: &[u32], mut e: u64, modulus: &[u32], p: u32) -> Vec<u32> {
        let mut result = vec![1u32];
        let mut b = rem(base, modulus, p);
        while e > 0 {
            if e & 1 == 1 {
                result = rem(&mul(&result, &b, p), modulus, p);
            }
            b = rem(&mul(&b, &b, p), modulus, p);
            e >>= 1;
        }
        result
    }

    /// Rabin-style test: a monic `f` of degree n is irreducible iff
    /// gcd(T^{p^i} - T, f) = 1 for every i ≤ n/2.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let f = trim(f.to_vec());
        let n = f.len() - 1;
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let t = vec![0u32, 1];
        let mut h = t.clone();
        for _ in 0..n / 2 {
            h = pow_mod(&h, p as u64, &f, p);
            let diff = sub(&h, &t, p);
            let g = gcd(&diff, &f, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

impl FieldTower {
    /// Builds the tower for `q = p^a` with the default size budget.
    pub fn new(p: u32, a: u32) -> Result<Self> {
        Self::with_budget(p, a, DEFAULT_FIELD_BUDGET)
    }

    /// Builds the tower, refusing ambient fields larger than `budget`.
    ///
    /// The modulus is the lexicographically first monic irreducible
    /// polynomial of degree 4a over F_p and `xi` is the lexicographically
    /// first element of F_{q^2} of multiplicative order q^2 - 1.
    pub fn with_budget(p: u32, a: u32, budget: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if a == 0 {
            return Err(Error::InvalidParameter("a must be at least 1".into()));
        }
        let degree = 4 * a as usize;
        let size = (p as u64).checked_pow(degree as u32).unwrap_or(u64::MAX);
        if size > budget || size > u32::MAX as u64 / 2 {
            return Err(Error::BudgetExceeded {
                what: "ambient field size".into(),
                needed: size,
                budget,
            });
        }
        let size = size as u32;
        let q = (p as u64).pow(a);

        let modulus = Self::first_irreducible(p, degree);

        let mut tower = FieldTower {
            p,
            a,
            q,
            degree,
            size,
            modulus,
            one: p.pow(degree as u32 - 1),
            generator: FieldElement::ZERO,
            xi: FieldElement::ZERO,
            exp: Vec::new(),
            log: Vec::new(),
            zech: Vec::new(),
        };
        tower.build_tables();
        tower.xi = tower.first_element_of_order(q * q - 1, Level::Fq2);
        Ok(tower)
    }

    fn first_irreducible(p: u32, degree: usize) -> Vec<u32> {
        let total = (p as u64).pow(degree as u32);
        for rank in 0..total {
            // rank enumerates (c_0, ..., c_{n-1}) lexicographically, c_0 first.
            let mut coeffs = vec![0u32; degree];
            let mut r = rank;
            for i in (0..degree).rev() {
                coeffs[i] = (r % p as u64) as u32;
                r /= p as u64;
            }
            let mut f = coeffs.clone();
            f.push(1);
            if fp_poly::is_irreducible(&f, p) {
                return coeffs;
            }
        }
        unreachable!("irreducible polynomials of every degree exist")
    }

    fn poly_of_index(&self, idx: u32) -> Vec<u32> {
        let mut coeffs = vec![0u32; self.degree];
        let mut r = idx;
        for i in (0..self.degree).rev() {
            coeffs[i] = r % self.p;
            r /= self.p;
        }
        fp_poly::trim(coeffs)
    }

    fn index_of_poly(&self, f: &[u32]) -> u32 {
        let mut idx = 0u32;
        for i in 0..self.degree {
            idx = idx * self.p + f.get(i).copied().unwrap_or(0);
        }
        idx
    }

    fn full_modulus(&self) -> Vec<u32> {
        let mut f = self.modulus.clone();
        f.push(1);
        f
    }

    fn build_tables(&mut self) {
        let order = (self.size - 1) as u64;
        let factors = prime_factors(order);
        let modulus = self.full_modulus();
        let p = self.p;

        // Lexicographically first primitive element of the ambient field.
        let generator = (1..self.size)
            .find(|&idx| {
                let g = self.poly_of_index(idx);
                factors
                    .iter()
                    .all(|&r| fp_poly::pow_mod(&g, order / r, &modulus, p) != vec![1])
            })
            .expect("multiplicative group is cyclic");
        self.generator = FieldElement(generator);

        let g = self.poly_of_index(generator);
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![NO_LOG; self.size as usize];
        let mut cur = vec![1u32];
        for k in 0..order as u32 {
            let idx = self.index_of_poly(&cur);
            exp.push(idx);
            log[idx as usize] = k;
            cur = fp_poly::rem(&fp_poly::mul(&cur, &g, p), &modulus, p);
        }

        // zech[k] = log(1 + g^k), NO_LOG when 1 + g^k = 0.
        let mut zech = vec![NO_LOG; order as usize];
        for k in 0..order as usize {
            let shifted = self.add_one_index(exp[k]);
            zech[k] = if shifted == 0 {
                NO_LOG
            } else {
                log[shifted as usize]
            };
        }
        self.exp = exp;
        self.log = log;
        self.zech = zech;
    }

    /// Adds 1 to an element by bumping its constant coefficient.
    fn add_one_index(&self, idx: u32) -> u32 {
        let c0 = idx / self.one;
        if c0 + 1 < self.p {
            idx + self.one
        } else {
            idx - (self.p - 1) * self.one
        }
    }

    fn first_element_of_order(&self, order: u64, level: Level) -> FieldElement {
        let group = (self.size - 1) as u64;
        (1..self.size)
            .map(FieldElement)
            .find(|&x| self.contains(level, x) && self.multiplicative_order(x) == order)
            .unwrap_or_else(|| panic!("no element of order {order} in {level} (group {group})"))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Cardinality of a level.
    pub fn cardinality(&self, level: Level) -> u64 {
        self.q.pow(level.degree_over_fq())
    }

    /// Number of elements of the ambient field F_{q^4}.
    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Fixed primitive element of F_{q^2}.
    pub fn xi(&self) -> FieldElement {
        self.xi
    }

    /// Primitive element of the ambient field used for the log tables.
    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    pub fn report(&self) -> TowerReport {
        TowerReport {
            p: self.p,
            a: self.a,
            modulus: self.modulus.clone(),
            xi: self.coeffs(self.xi),
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(self.one)
    }

    /// Embeds an integer through F_p.
    pub fn from_int(&self, n: i64) -> FieldElement {
        let r = n.rem_euclid(self.p as i64) as u32;
        FieldElement(r * self.one)
    }

    /// The element `T` (class of the variable modulo the modulus).
    pub fn variable(&self) -> FieldElement {
        self.from_coeffs(&[0, 1]).expect("degree >= 4")
    }

    /// Element from little-endian coefficients `c_0, c_1, ...`; missing
    /// trailing coefficients are zero.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.degree {
            return Err(Error::InvalidParameter(format!(
                "{} coefficients for a degree {} field",
                coeffs.len(),
                self.degree
            )));
        }
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::InvalidParameter(format!(
                "coefficient {bad} is not a residue mod {}",
                self.p
            )));
        }
        Ok(FieldElement(self.index_of_poly(coeffs)))
    }

    /// Full coefficient vector `(c_0, ..., c_{4a-1})`.
    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        let mut coeffs = vec![0u32; self.degree];
        let mut r = x.0;
        for i in (0..self.degree).rev() {
            coeffs[i] = r % self.p;
            r /= self.p;
        }
        coeffs
    }

    /// Element with the given lexicographic index.
    pub fn element(&self, index: u32) -> Result<FieldElement> {
        if index >= self.size {
            return Err(Error::InvalidParameter(format!(
                "element index {index} outside a field of size {}",
                self.size
            )));
        }
        Ok(FieldElement(index))
    }

    /// All ambient elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.size).map(FieldElement)
    }

    /// Elements of a level in lexicographic order.
    pub fn level_elements(&self, level: Level) -> Vec<FieldElement> {
        let step = ((self.size - 1) as u64 / (self.cardinality(level) - 1)) as usize;
        let mut out: Vec<FieldElement> = std::iter::once(FieldElement::ZERO)
            .chain(self.exp.iter().step_by(step).map(|&i| FieldElement(i)))
            .collect();
        out.sort_unstable();
        out
    }

    fn log_of(&self, x: FieldElement) -> Option<u32> {
        match self.log[x.0 as usize] {
            NO_LOG => None,
            l => Some(l),
        }
    }

    fn group_order(&self) -> u32 {
        self.size - 1
    }

    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        if x.is_zero() {
            return y;
        }
        if y.is_zero() {
            return x;
        }
        if self.p == 2 {
            return FieldElement(x.0 ^ y.0);
        }
        let lx = self.log[x.0 as usize];
        let ly = self.log[y.0 as usize];
        let n = self.group_order();
        let k = (ly + n - lx) % n;
        match self.zech[k as usize] {
            NO_LOG => FieldElement::ZERO,
            z => FieldElement(self.exp[((lx as u64 + z as u64) % n as u64) as usize]),
        }
    }

    pub fn neg(&self, x: FieldElement) -> FieldElement {
        if x.is_zero() || self.p == 2 {
            return x;
        }
        let n = self.group_order();
        let l = self.log[x.0 as usize];
        FieldElement(self.exp[((l + n / 2) % n) as usize])
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        if x.is_zero() || y.is_zero() {
            return FieldElement::ZERO;
        }
        let n = self.group_order() as u64;
        let l = self.log[x.0 as usize] as u64 + self.log[y.0 as usize] as u64;
        FieldElement(self.exp[(l % n) as usize])
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        let l = self.log_of(x).ok_or(Error::DivisionByZero)?;
        let n = self.group_order();
        Ok(FieldElement(self.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn pow(&self, x: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return self.one();
        }
        match self.log_of(x) {
            None => FieldElement::ZERO,
            Some(l) => {
                let n = self.group_order() as u128;
                let k = (l as u128 * e as u128) % n;
                FieldElement(self.exp[k as usize])
            }
        }
    }

    /// Power with a possibly negative exponent.
    pub fn pow_signed(&self, x: FieldElement, e: i64) -> Result<FieldElement> {
        if e >= 0 {
            Ok(self.pow(x, e as u64))
        } else {
            Ok(self.pow(self.inv(x)?, e.unsigned_abs()))
        }
    }

    /// `x^{q^k}`.
    pub fn frobenius(&self, x: FieldElement, k: u32) -> FieldElement {
        let qk = self.q.pow(k % 4);
        self.pow(x, qk)
    }

    pub fn multiplicative_order(&self, x: FieldElement) -> u64 {
        match self.log_of(x) {
            None => 0,
            Some(l) => {
                let n = self.group_order() as u64;
                n / gcd(l as u64, n)
            }
        }
    }

    pub fn contains(&self, level: Level, x: FieldElement) -> bool {
        self.pow(x, self.cardinality(level)) == x
    }

    /// Smallest level containing `x`.
    pub fn subfield_level(&self, x: FieldElement) -> Level {
        Level::ALL
            .into_iter()
            .find(|&l| self.contains(l, x))
            .expect("ambient field is the top level")
    }

    fn check_levels(&self, x: FieldElement, from: Level, to: Level) -> Result<u32> {
        if to > from {
            return Err(Error::InvalidParameter(format!(
                "{to} is not a subfield of {from}"
            )));
        }
        if !self.contains(from, x) {
            return Err(Error::NotInSubfield { level: from });
        }
        Ok(from.degree_over_fq() / to.degree_over_fq())
    }

    /// Relative trace `Σ x^{|to|^i}` from `from` down to `to`.
    pub fn trace(&self, x: FieldElement, from: Level, to: Level) -> Result<FieldElement> {
        let r = self.check_levels(x, from, to)?;
        let base = self.cardinality(to);
        let mut acc = FieldElement::ZERO;
        let mut cur = x;
        for _ in 0..r {
            acc = self.add(acc, cur);
            cur = self.pow(cur, base);
        }
        Ok(acc)
    }

    /// Relative norm `Π x^{|to|^i}` from `from` down to `to`.
    pub fn norm(&self, x: FieldElement, from: Level, to: Level) -> Result<FieldElement> {
        let r = self.check_levels(x, from, to)?;
        let base = self.cardinality(to);
        let mut acc = self.one();
        let mut cur = x;
        for _ in 0..r {
            acc = self.mul(acc, cur);
            cur = self.pow(cur, base);
        }
        Ok(acc)
    }

    /// Sum of a slice.
    pub fn sum<I: IntoIterator<Item = FieldElement>>(&self, items: I) -> FieldElement {
        items
            .into_iter()
            .fold(FieldElement::ZERO, |acc, x| self.add(acc, x))
    }

    /// `n · x` for an integer `n`.
    pub fn scale_int(&self, x: FieldElement, n: i64) -> FieldElement {
        self.mul(self.from_int(n), x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Independent oracle: trial division by every monic polynomial of
    // degree ≤ n/2.
    fn brute_irreducible(f: &[u32], p: u32) -> bool {
        let n = f.len() - 1;
        for d in 1..=n / 2 {
            let count = p.pow(d as u32);
            for idx in 0..count {
                let mut g = Vec::with_capacity(d + 1);
                let mut r = idx;
                for _ in 0..d {
                    g.push(r % p);
                    r /= p;
                }
                g.push(1);
                if fp_poly::rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    fn brute_first_modulus(p: u32, degree: usize) -> Vec<u32> {
        let total = p.pow(degree as u32);
        for rank in 0..total {
            let mut coeffs = vec![0u32; degree];
            let mut r = rank;
            for i in (0..degree).rev() {
                coeffs[i] = r % p;
                r /= p;
            }
            let mut f = coeffs.clone();
            f.push(1);
            if brute_irreducible(&f, p) {
                return coeffs;
            }
        }
        panic!("none found")
    }

    #[test]
    fn first_modulus_matches_exhaustive_search() {
        assert_eq!(brute_first_modulus(2, 4), vec![1, 0, 0, 1]);
        assert_eq!(brute_first_modulus(3, 4), vec![1, 0, 1, 1]);
        assert_eq!(FieldTower::new(2, 1).unwrap().modulus(), &[1, 0, 0, 1]);
        assert_eq!(FieldTower::new(3, 1).unwrap().modulus(), &[1, 0, 1, 1]);
        assert_eq!(
            FieldTower::new(5, 1).unwrap().modulus(),
            brute_first_modulus(5, 4).as_slice()
        );
    }

    #[test]
    fn rabin_test_agrees_with_trial_division() {
        for p in [2u32, 3] {
            for deg in 2..=4usize {
                for idx in 0..p.pow(deg as u32) {
                    let mut f: Vec<u32> = (0..deg).map(|i| (idx / p.pow(i as u32)) % p).collect();
                    f.push(1);
                    assert_eq!(
                        fp_poly::is_irreducible(&f, p),
                        brute_irreducible(&f, p),
                        "{f:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn tower_sizes() {
        let t = FieldTower::new(3, 1).unwrap();
        assert_eq!(t.size(), 81);
        assert_eq!(t.q(), 3);
        assert_eq!(t.cardinality(Level::Fq2), 9);
        assert_eq!(t.level_elements(Level::Fq2).len(), 9);
        assert_eq!(t.level_elements(Level::Fq).len(), 3);
    }

    #[test]
    fn rejects_non_prime_and_budget() {
        assert!(matches!(FieldTower::new(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(FieldTower::new(1, 1), Err(Error::NotPrime(1))));
        assert!(matches!(
            FieldTower::with_budget(5, 1, 100),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn xi_is_primitive_in_k() {
        for (p, a) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let t = FieldTower::new(p, a).unwrap();
            let q = t.q();
            assert_eq!(t.multiplicative_order(t.xi()), q * q - 1);
            assert_eq!(t.subfield_level(t.xi()), Level::Fq2);
        }
    }

    #[test]
    fn deterministic_build() {
        let a = FieldTower::new(3, 1).unwrap();
        let b = FieldTower::new(3, 1).unwrap();
        assert_eq!(a.report(), b.report());
    }

    #[test]
    fn trace_and_norm_on_f4() {
        let t = FieldTower::new(2, 1).unwrap();
        // β with β² + β + 1 = 0 is an element of order 3.
        let beta = t
            .elements()
            .find(|&x| t.multiplicative_order(x) == 3)
            .unwrap();
        assert_eq!(t.add(t.add(t.mul(beta, beta), beta), t.one()), t.zero());
        // direct Frobenius sum
        assert_eq!(t.add(beta, t.pow(beta, 2)), t.one());
        assert_eq!(t.trace(beta, Level::Fq2, Level::Fq).unwrap(), t.one());
        assert_eq!(t.norm(beta, Level::Fq2, Level::Fq).unwrap(), t.one());
        assert_eq!(t.trace(t.zero(), Level::Fq4, Level::Fq).unwrap(), t.zero());
        assert_eq!(t.norm(t.one(), Level::Fq4, Level::Fq2).unwrap(), t.one());
    }

    #[test]
    fn trace_rejects_element_outside_level() {
        let t = FieldTower::new(3, 1).unwrap();
        let g = t.generator();
        assert!(matches!(
            t.trace(g, Level::Fq2, Level::Fq),
            Err(Error::NotInSubfield { level: Level::Fq2 })
        ));
        assert!(t.trace(t.one(), Level::Fq, Level::Fq2).is_err());
    }

    #[test]
    fn norm_of_xi_generates_fq_star() {
        for (p, a) in [(2, 1), (3, 1), (5, 1), (2, 2)] {
            let t = FieldTower::new(p, a).unwrap();
            let n = t.norm(t.xi(), Level::Fq2, Level::Fq).unwrap();
            assert_eq!(t.multiplicative_order(n), t.q() - 1);
        }
    }

    #[test]
    fn subfield_levels() {
        let t = FieldTower::new(3, 1).unwrap();
        assert_eq!(t.subfield_level(t.zero()), Level::Fq);
        assert_eq!(t.subfield_level(t.xi()), Level::Fq2);
        // A root of T² - xi (xi is a non-square in F_9) lies in F_81 only.
        let r = t.elements().find(|&z| t.mul(z, z) == t.xi()).unwrap();
        assert_eq!(t.subfield_level(r), Level::Fq4);
    }

    #[test]
    fn trace_is_linear_surjective_with_kernel_q() {
        for (p, a) in [(2, 1), (3, 1), (2, 2)] {
            let t = FieldTower::new(p, a).unwrap();
            let k = t.level_elements(Level::Fq2);
            let mut kernel = 0;
            let mut image = std::collections::BTreeSet::new();
            for &x in &k {
                let tr = t.trace(x, Level::Fq2, Level::Fq).unwrap();
                assert_eq!(tr, t.add(x, t.pow(x, t.q())));
                assert_eq!(t.pow(tr, t.q()), tr);
                if tr.is_zero() {
                    kernel += 1;
                }
                image.insert(tr);
            }
            assert_eq!(kernel, t.q());
            assert_eq!(image.len() as u64, t.q());
            for &c in &t.level_elements(Level::Fq) {
                for &x in k.iter().take(5) {
                    let lhs = t.trace(t.mul(c, x), Level::Fq2, Level::Fq).unwrap();
                    let rhs = t.mul(c, t.trace(x, Level::Fq2, Level::Fq).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn frobenius_fixes_exactly_k() {
        let t = FieldTower::new(2, 2).unwrap();
        let q2 = t.cardinality(Level::Fq2);
        let fixed = t.elements().filter(|&x| t.pow(x, q2) == x).count();
        assert_eq!(fixed as u64, q2);
    }

    #[test]
    fn coefficient_round_trip_and_lex_order() {
        let t = FieldTower::new(3, 1).unwrap();
        for x in t.elements() {
            assert_eq!(t.from_coeffs(&t.coeffs(x)).unwrap(), x);
        }
        let a = t.from_coeffs(&[0, 2]).unwrap();
        let b = t.from_coeffs(&[1]).unwrap();
        assert!(a < b);
        assert!(t.from_coeffs(&[3]).is_err());
    }

    #[test]
    fn addition_matches_coefficientwise_sum() {
        let t = FieldTower::new(3, 1).unwrap();
        for x in t.elements().step_by(7) {
            for y in t.elements().step_by(5) {
                let cx = t.coeffs(x);
                let cy = t.coeffs(y);
                let s: Vec<u32> = cx.iter().zip(&cy).map(|(a, b)| (a + b) % 3).collect();
                assert_eq!(t.add(x, y), t.from_coeffs(&s).unwrap());
            }
        }
    }

    fn tower_strategy() -> impl Strategy<Value = (u32, u32)> {
        prop_oneof![Just((2, 1)), Just((3, 1)), Just((2, 2)), Just((5, 1))]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn field_axioms((p, a) in tower_strategy(), i in any::<u32>(), j in any::<u32>(), k in any::<u32>()) {
            let t = FieldTower::new(p, a).unwrap();
            let x = t.element(i % t.size()).unwrap();
            let y = t.element(j % t.size()).unwrap();
            let z = t.element(k % t.size()).unwrap();
            prop_assert_eq!(t.add(t.add(x, y), z), t.add(x, t.add(y, z)));
            prop_assert_eq!(t.mul(t.mul(x, y), z), t.mul(x, t.mul(y, z)));
            prop_assert_eq!(t.mul(x, t.add(y, z)), t.add(t.mul(x, y), t.mul(x, z)));
            prop_assert_eq!(t.add(x, t.neg(x)), t.zero());
            if !x.is_zero() {
                prop_assert_eq!(t.mul(t.inv(x).unwrap(), x), t.one());
            }
            let q2 = t.cardinality(Level::Fq2);
            prop_assert_eq!(t.pow(t.add(x, y), q2), t.add(t.pow(x, q2), t.pow(y, q2)));
            prop_assert_eq!(t.pow(t.mul(x, y), q2), t.mul(t.pow(x, q2), t.pow(y, q2)));
        }

        #[test]
        fn norm_is_multiplicative((p, a) in tower_strategy(), i in any::<u32>(), j in any::<u32>()) {
            let t = FieldTower::new(p, a).unwrap();
            let x = t.element(i % t.size()).unwrap();
            let y = t.element(j % t.size()).unwrap();
            let nx = t.norm(x, Level::Fq4, Level::Fq2).unwrap();
            let ny = t.norm(y, Level::Fq4, Level::Fq2).unwrap();
            prop_assert_eq!(t.norm(t.mul(x, y), Level::Fq4, Level::Fq2).unwrap(), t.mul(nx, ny));
            prop_assert!(t.contains(Level::Fq2, nx));
        }
    }
}
