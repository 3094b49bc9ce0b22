//! Exact rational elimination for small integer systems.

use num::{BigInt, BigRational, One, Signed, Zero};

/// Solve `columns * x = rhs` exactly.
///
/// Returns `None` when the system is inconsistent or the columns are linearly
/// dependent (no unique solution).
pub fn solve_unique(columns: &[Vec<i64>], rhs: &[i64]) -> Option<Vec<BigRational>> {
    let rows = rhs.len();
    let cols = columns.len();
    debug_assert!(columns.iter().all(|c| c.len() == rows));
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));
    // augmented row-major matrix
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            columns
                .iter()
                .map(|c| q(c[r]))
                .chain(std::iter::once(q(rhs[r])))
                .collect()
        })
        .collect();

    let mut pivot_row = 0;
    for col in 0..cols {
        let found = (pivot_row..rows).find(|&r| !m[r][col].is_zero())?;
        m.swap(pivot_row, found);
        let inv = BigRational::one() / &m[pivot_row][col];
        for x in m[pivot_row].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[pivot_row].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == pivot_row || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot) {
                *x -= &factor * p;
            }
        }
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    Some((0..cols).map(|c| m[c][cols].clone()).collect())
}

/// Integer entries of `x`, or `None` if any entry is fractional.
pub fn to_integers(x: &[BigRational]) -> Option<Vec<i64>> {
    x.iter()
        .map(|v| {
            if v.is_integer() && v.to_integer().abs() <= BigInt::from(i64::MAX) {
                i64::try_from(v.to_integer()).ok()
            } else {
                None
            }
        })
        .collect()
}
