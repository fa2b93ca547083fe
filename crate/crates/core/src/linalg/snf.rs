//! Smith normal form with unimodular transforms, and the lattice comparisons
//! built on it.

use super::{cneg, egcd, exact_div, Matrix, Scalar};

/// Result of [`smith_normal_form`]: `u * a * v = d` with `u`, `v` unimodular
/// and `d` diagonal, entries non-negative, each dividing the next.
#[derive(Clone)]
pub struct SnfResult<T> {
    pub u: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
}

impl<T: Scalar> SnfResult<T> {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<T> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

impl<T: Scalar> std::fmt::Debug for SnfResult<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SnfResult")
            .field("u", &self.u)
            .field("d", &self.d)
            .field("v", &self.v)
            .finish()
    }
}

struct Elim<T> {
    d: Matrix<T>,
    u: Matrix<T>,
    v: Matrix<T>,
}

impl<T: Scalar> Elim<T> {
    fn new(a: &Matrix<T>) -> Self {
        Elim { d: a.clone(), u: Matrix::identity(a.rows()), v: Matrix::identity(a.cols()) }
    }

    // Pivot rule: smallest absolute value in the trailing submatrix, ties
    // broken by lowest (row, col). Fixes the output bit-for-bit.
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(T, usize, usize)> = None;
        for i in t..self.d.rows() {
            for j in t..self.d.cols() {
                let x = &self.d[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let a = x.abs();
                match &best {
                    Some((b, _, _)) if *b <= a => {}
                    _ => best = Some((a, i, j)),
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
    }

    fn row_subtract(&mut self, dst: usize, src: usize, q: &T) {
        self.d.row_subtract(dst, src, q);
        self.u.row_subtract(dst, src, q);
    }

    fn col_subtract(&mut self, dst: usize, src: usize, q: &T) {
        self.d.col_subtract(dst, src, q);
        self.v.col_subtract(dst, src, q);
    }

    fn add_row(&mut self, dst: usize, src: usize) {
        let minus_one = cneg(&T::one());
        self.row_subtract(dst, src, &minus_one);
    }

    /// Unimodular 2x2 on rows (t, i) turning d[t][j] into gcd(d[t][j], d[i][j])
    /// and d[i][j] into 0.
    fn row_rotate(&mut self, t: usize, i: usize, j: usize) {
        let x = self.d[(t, j)].clone();
        let y = self.d[(i, j)].clone();
        let (g, s, w) = egcd(&x, &y);
        let a = exact_div(&x, &g);
        let b = exact_div(&y, &g);
        // [[s, w], [-b, a]] has determinant s*a + w*b = (s*x + w*y)/g = 1.
        self.d.row_transform(t, i, &s, &w, &cneg(&b), &a);
        self.u.row_transform(t, i, &s, &w, &cneg(&b), &a);
    }

    /// Column analogue of [`Self::row_rotate`] on columns (t, j) at row i.
    fn col_rotate(&mut self, t: usize, j: usize, i: usize) {
        let x = self.d[(i, t)].clone();
        let y = self.d[(i, j)].clone();
        let (g, s, w) = egcd(&x, &y);
        let a = exact_div(&x, &g);
        let b = exact_div(&y, &g);
        self.d.col_transform(t, j, &s, &w, &cneg(&b), &a);
        self.v.col_transform(t, j, &s, &w, &cneg(&b), &a);
    }

    /// Clears row and column `t` (except the pivot) by gcd steps; the pivot
    /// shrinks to a gcd whenever a non-divisible entry shows up, so the loop
    /// terminates.
    fn eliminate_at(&mut self, t: usize) {
        loop {
            for i in t + 1..self.d.rows() {
                if self.d[(i, t)].is_zero() {
                    continue;
                }
                let (q, r) = self.d[(i, t)].div_rem(&self.d[(t, t)]);
                if r.is_zero() {
                    self.row_subtract(i, t, &q);
                } else {
                    self.row_rotate(t, i, t);
                }
            }
            for j in t + 1..self.d.cols() {
                if self.d[(t, j)].is_zero() {
                    continue;
                }
                let (q, r) = self.d[(t, j)].div_rem(&self.d[(t, t)]);
                if r.is_zero() {
                    self.col_subtract(j, t, &q);
                } else {
                    self.col_rotate(t, j, t);
                }
            }
            let col_clear = (t + 1..self.d.rows()).all(|i| self.d[(i, t)].is_zero());
            let row_clear = (t + 1..self.d.cols()).all(|j| self.d[(t, j)].is_zero());
            if col_clear && row_clear {
                return;
            }
        }
    }

    /// First (i, j) in the trailing submatrix not divisible by the pivot.
    fn find_nondivisible(&self, t: usize) -> Option<(usize, usize)> {
        let p = &self.d[(t, t)];
        for i in t + 1..self.d.rows() {
            for j in t + 1..self.d.cols() {
                if !self.d[(i, j)].mod_floor(p).is_zero() {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// Smith normal form of an arbitrary integer matrix (empty dimensions
/// included). Deterministic: identical inputs give identical `(u, d, v)`.
pub fn smith_normal_form<T: Scalar>(a: &Matrix<T>) -> SnfResult<T> {
    let mut e = Elim::new(a);
    let steps = a.rows().min(a.cols());
    let mut t = 0;
    while t < steps {
        let (pi, pj) = match e.find_pivot(t) {
            Some(p) => p,
            None => break,
        };
        e.swap_rows(t, pi);
        e.swap_cols(t, pj);
        loop {
            e.eliminate_at(t);
            // Fold a non-divisible entry into row t so the pivot becomes a
            // divisor of the whole trailing submatrix; this is what makes the
            // diagonal a divisibility chain.
            match e.find_nondivisible(t) {
                Some((i, _)) => e.add_row(t, i),
                None => break,
            }
        }
        t += 1;
    }
    for i in 0..steps {
        if e.d[(i, i)].is_negative() {
            e.d.negate_row(i);
            e.u.negate_row(i);
        }
    }
    SnfResult { u: e.u, d: e.d, v: e.v }
}

/// Invariant factors of the lattice spanned by the rows of `gens` inside
/// `Z^cols` (the nonzero Smith diagonal of the generator matrix).
pub fn lattice_invariants<T: Scalar>(gens: &Matrix<T>) -> Vec<T> {
    smith_normal_form(gens).invariant_factors()
}

/// Whether the rows of `a` and the rows of `b` span the same subgroup of
/// `Z^cols`. Both lattices embed in the lattice of the stacked matrix; a
/// sublattice with the same invariant factors as its superlattice equals it,
/// so comparing all three invariant lists decides equality.
pub fn lattices_equal<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> bool {
    assert_eq!(a.cols(), b.cols(), "lattices live in different ambient spaces");
    let inv_a = lattice_invariants(a);
    let inv_b = lattice_invariants(b);
    if inv_a != inv_b {
        return false;
    }
    lattice_invariants(&a.vstack(b)) == inv_a
}

/// `u * a * v == d`, oracle-style.
#[cfg(test)]
pub(crate) fn check_snf_identity<T: Scalar>(a: &Matrix<T>, r: &SnfResult<T>) -> bool {
    r.u.mul(a).mul(&r.v) == r.d
}
