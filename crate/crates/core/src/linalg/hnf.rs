//! Row-style Hermite normal form: the canonical representative of the lattice
//! spanned by a matrix's rows. Used to normalize kernel bases for stable
//! output and as a second, independent route for lattice comparisons.

use super::{egcd, exact_div, Matrix, Scalar};

/// Hermite normal form of the row lattice of `m`: echelon rows, positive
/// pivots, entries above each pivot reduced into `[0, pivot)`, zero rows
/// dropped. Two matrices have equal row lattices iff their forms are equal.
pub fn row_hnf<T: Scalar>(m: &Matrix<T>) -> Matrix<T> {
    let mut h = m.clone();
    let (rows, cols) = (h.rows(), h.cols());
    let mut r = 0;
    for j in 0..cols {
        if r == rows {
            break;
        }
        if h[(r, j)].is_zero() {
            if let Some(i) = (r + 1..rows).find(|&i| !h[(i, j)].is_zero()) {
                h.swap_rows(r, i);
            }
        }
        if h[(r, j)].is_zero() {
            continue; // no pivot in this column
        }
        for i in r + 1..rows {
            if h[(i, j)].is_zero() {
                continue;
            }
            let x = h[(r, j)].clone();
            let y = h[(i, j)].clone();
            let (g, s, w) = egcd(&x, &y);
            let a = exact_div(&x, &g);
            let b = exact_div(&y, &g);
            h.row_transform(r, i, &s, &w, &super::cneg(&b), &a);
        }
        if h[(r, j)].is_negative() {
            h.negate_row(r);
        }
        let pivot = h[(r, j)].clone();
        for i in 0..r {
            let q = h[(i, j)].div_floor(&pivot);
            if !q.is_zero() {
                h.row_subtract(i, r, &q);
            }
        }
        r += 1;
    }
    // Rows past r are zero by construction.
    Matrix::from_fn(r, cols, |i, j| h[(i, j)].clone())
}
