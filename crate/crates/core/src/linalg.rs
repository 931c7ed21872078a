//! Gaussian elimination over the ambient field.

use crate::field::{FieldElement, FieldTower};

pub type Matrix = Vec<Vec<FieldElement>>;

/// Reduces `rows` in place to reduced row echelon form and returns the pivot
/// columns in increasing order. Zero rows end up at the bottom.
pub fn rref(t: &FieldTower, rows: &mut Matrix) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = t.inv(rows[r][c]).expect("pivot is nonzero");
        for v in rows[r].iter_mut() {
            *v = t.mul(*v, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c];
            for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = t.sub(*v, t.mul(factor, pv));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(t: &FieldTower, rows: &Matrix) -> usize {
    let mut m = rows.clone();
    rref(t, &mut m).len()
}

/// A nonzero vector `v` with `rows · v = 0`, or `None` when the kernel is
/// trivial. Also returns the rank. The vector has a 1 in the first free
/// column and zeros in the other free columns.
pub fn kernel_vector(
    t: &FieldTower,
    rows: &Matrix,
    ncols: usize,
) -> (usize, Option<Vec<FieldElement>>) {
    let mut m = rows.clone();
    let pivots = rref(t, &mut m);
    let rank = pivots.len();
    let Some(free) = (0..ncols).find(|c| !pivots.contains(c)) else {
        return (rank, None);
    };
    let mut v = vec![t.zero(); ncols];
    v[free] = t.one();
    for (row, &pc) in m.iter().zip(&pivots) {
        v[pc] = t.neg(row[free]);
    }
    (rank, Some(v))
}

/// Solves the square system `a · x = b`, if `a` is invertible.
pub fn solve(t: &FieldTower, a: &Matrix, b: &[FieldElement]) -> Option<Vec<FieldElement>> {
    let n = a.len();
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    let pivots = rref(t, &mut aug);
    if pivots.len() != n || pivots.iter().any(|&c| c >= n) {
        return None;
    }
    Some(aug.iter().map(|row| row[n]).collect())
}
