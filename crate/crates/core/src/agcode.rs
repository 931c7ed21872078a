//! One-point codes `C(D, λP∞)`: evaluate a basis of L(λP∞) at the
//! k-rational affine points in enumeration order.

use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{CurveModel, Point};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldTower, Level};
use crate::function_field::{FunctionField, Monomial};
use crate::linalg;

/// Default cap on codeword-symbol operations for the exhaustive scan.
pub const DEFAULT_DISTANCE_BUDGET: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: u64,
    pub k: u64,
    pub lambda: u64,
    pub q2: u64,
    pub d_designed: u64,
}

#[derive(Clone, Debug)]
pub struct Code {
    pub params: CodeParams,
    pub basis_monomials: Vec<Monomial>,
    pub points: Vec<Point>,
    /// `k` rows of length `n`.
    pub matrix: Vec<Vec<FieldElement>>,
}

/// Builds the generator matrix and checks it has full row rank.
pub fn build_code(curve: &CurveModel, lambda: u64) -> Result<Code> {
    curve.require_maximal()?;
    let points: Vec<Point> = curve
        .enumerate_points(Level::Fq2)?
        .into_iter()
        .filter(|p| !p.is_infinity())
        .collect();
    let n = points.len() as u64;
    if lambda >= n {
        return Err(Error::LambdaTooLarge { lambda, length: n });
    }
    let ff = FunctionField::new(curve);
    let t = curve.tower();
    let basis = ff.rr_basis(lambda);
    let matrix: Vec<Vec<FieldElement>> = basis
        .monomials
        .iter()
        .map(|&(i, j)| {
            points
                .iter()
                .map(|p| {
                    let (x, y) = p.coords().expect("affine");
                    t.mul(t.pow(x, i as u64), t.pow(y, j as u64))
                })
                .collect()
        })
        .collect();
    let rank = linalg::rank(t, &matrix);
    if rank != basis.len() {
        return Err(Error::Linear(format!(
            "generator matrix has rank {rank}, expected {}",
            basis.len()
        )));
    }
    Ok(Code {
        params: CodeParams {
            n,
            k: basis.len() as u64,
            lambda,
            q2: t.cardinality(Level::Fq2),
            d_designed: n - lambda,
        },
        basis_monomials: basis.monomials,
        points,
        matrix,
    })
}

/// Minimum weight over all nonzero codewords.
///
/// Codewords are split by the index of their leading nonzero message symbol,
/// normalized to 1 (scaling does not change weight). Each stratum is scanned
/// in parallel and abandons a partial sum once it exceeds the shared minimum.
pub fn min_distance_exact(t: &FieldTower, code: &Code, budget: u64) -> Result<u64> {
    let k = code.params.k as usize;
    let n = code.params.n as usize;
    let symbols = t.level_elements(Level::Fq2);
    let q2 = symbols.len() as u64;
    let codewords = (0..k as u32).map(|i| q2.pow(i)).sum::<u64>();
    let needed = codewords.saturating_mul(n as u64);
    if needed > budget {
        return Err(Error::BudgetExceeded {
            what: "codeword scan".into(),
            needed,
            budget,
        });
    }
    let best = AtomicU64::new(n as u64);
    (0..k).into_par_iter().for_each(|lead| {
        let tail = k - lead - 1;
        let count = q2.pow(tail as u32);
        let mut word = vec![t.zero(); n];
        for idx in 0..count {
            word.copy_from_slice(&code.matrix[lead]);
            let mut rest = idx;
            for row in &code.matrix[lead + 1..] {
                let c = symbols[(rest % q2) as usize];
                rest /= q2;
                if c.is_zero() {
                    continue;
                }
                for (w, &g) in word.iter_mut().zip(row) {
                    *w = t.add(*w, t.mul(c, g));
                }
            }
            let cutoff = best.load(Ordering::Relaxed);
            let mut weight = 0u64;
            for w in &word {
                if !w.is_zero() {
                    weight += 1;
                    if weight >= cutoff {
                        break;
                    }
                }
            }
            best.fetch_min(weight, Ordering::Relaxed);
        }
    });
    Ok(best.into_inner())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixFormat {
    Csv,
    Json,
}

impl std::str::FromStr for MatrixFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(MatrixFormat::Csv),
            "json" => Ok(MatrixFormat::Json),
            other => Err(Error::Parse(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub params: CodeParams,
    pub basis_monomials: Vec<Monomial>,
    /// Entries as little-endian coefficient tuples `c_0, c_1, ...`.
    pub matrix: Vec<Vec<Vec<u32>>>,
}

fn entry_string(t: &FieldTower, e: FieldElement) -> String {
    t.coeffs(e)
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(":")
}

fn parse_entry(t: &FieldTower, s: &str) -> Result<FieldElement> {
    let coeffs = s
        .split(':')
        .map(|c| {
            c.trim()
                .parse::<u32>()
                .map_err(|e| Error::Parse(format!("entry {s:?}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    t.from_coeffs(&coeffs)
}

/// Serializes the generator matrix.
///
/// CSV: a header line `n,k,lambda,q2`, one line with those values, then `k`
/// lines of `n` colon-joined coefficient tuples.
pub fn render_matrix(t: &FieldTower, code: &Code, format: MatrixFormat) -> Result<String> {
    match format {
        MatrixFormat::Csv => {
            let p = code.params;
            let mut out = format!("n,k,lambda,q2\n{},{},{},{}\n", p.n, p.k, p.lambda, p.q2);
            for row in &code.matrix {
                let cells: Vec<String> = row.iter().map(|&e| entry_string(t, e)).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            Ok(out)
        }
        MatrixFormat::Json => {
            let file = MatrixFile {
                params: code.params,
                basis_monomials: code.basis_monomials.clone(),
                matrix: code
                    .matrix
                    .iter()
                    .map(|r| r.iter().map(|&e| t.coeffs(e)).collect())
                    .collect(),
            };
            let value = serde_json::to_value(&file)?;
            Ok(serde_json::to_string_pretty(&value)? + "\n")
        }
    }
}

pub fn export_matrix(t: &FieldTower, code: &Code, path: &Path, format: MatrixFormat) -> Result<()> {
    if path.as_os_str().is_empty() {
        return Err(Error::InvalidParameter("empty output path".into()));
    }
    std::fs::write(path, render_matrix(t, code, format)?)?;
    Ok(())
}

/// Reads back the parameters and matrix written by [`export_matrix`].
pub fn import_matrix(
    t: &FieldTower,
    path: &Path,
    format: MatrixFormat,
) -> Result<(CodeParams, Vec<Vec<FieldElement>>)> {
    let text = std::fs::read_to_string(path)?;
    match format {
        MatrixFormat::Csv => {
            let mut lines = text.lines();
            let header = lines
                .next()
                .ok_or_else(|| Error::Parse("empty file".into()))?;
            if header != "n,k,lambda,q2" {
                return Err(Error::Parse(format!("unexpected header {header:?}")));
            }
            let vals = lines
                .next()
                .ok_or_else(|| Error::Parse("missing parameter line".into()))?
                .split(',')
                .map(|v| v.parse::<u64>().map_err(|e| Error::Parse(e.to_string())))
                .collect::<Result<Vec<_>>>()?;
            let [n, k, lambda, q2] = vals[..] else {
                return Err(Error::Parse("parameter line needs 4 values".into()));
            };
            let matrix = lines
                .filter(|l| !l.is_empty())
                .map(|l| {
                    l.split(',')
                        .map(|c| parse_entry(t, c))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            if matrix.len() as u64 != k || matrix.iter().any(|r| r.len() as u64 != n) {
                return Err(Error::Parse(
                    "matrix shape does not match parameters".into(),
                ));
            }
            let params = CodeParams {
                n,
                k,
                lambda,
                q2,
                d_designed: n - lambda,
            };
            Ok((params, matrix))
        }
        MatrixFormat::Json => {
            let file: MatrixFile = serde_json::from_str(&text)?;
            let matrix = file
                .matrix
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|c| t.from_coeffs(c))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((file.params, matrix))
        }
    }
}
