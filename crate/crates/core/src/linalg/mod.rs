//! Exact dense integer linear algebra: Smith normal form, integer kernels,
//! modular kernels, Hermite normal form, fraction-free determinant and rank.
//!
//! All routines are generic over the scalar through [`Scalar`]. The crate-root
//! aliases instantiate them with arbitrary-precision `BigInt`, which is the
//! representation every public computation uses; bounded scalars (`i64`,
//! `i128`) are accepted for callers that know their inputs are tiny, and all
//! arithmetic on them goes through checked operations that panic on overflow
//! instead of wrapping.

mod hnf;
mod kernel;
mod snf;

pub use hnf::row_hnf;
pub use kernel::{integer_kernel_basis, kernel_mod};
pub use snf::{lattice_invariants, lattices_equal, smith_normal_form, SnfResult};

use std::fmt;
use std::hash::Hash;
use std::ops::{Index, IndexMut};

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};
use thiserror::Error;

/// Scalar types the engine can run on: exact signed integers with checked
/// arithmetic. Implemented by `BigInt` (never overflows) and the primitive
/// signed integers.
pub trait Scalar:
    Integer
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Clone
    + Hash
    + fmt::Debug
    + fmt::Display
    + 'static
{
}

impl<T> Scalar for T where
    T: Integer
        + Signed
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
        + Clone
        + Hash
        + fmt::Debug
        + fmt::Display
        + 'static
{
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),
}

pub(crate) fn cadd<T: Scalar>(a: &T, b: &T) -> T {
    a.checked_add(b).expect("integer overflow in exact arithmetic")
}

pub(crate) fn csub<T: Scalar>(a: &T, b: &T) -> T {
    a.checked_sub(b).expect("integer overflow in exact arithmetic")
}

pub(crate) fn cmul<T: Scalar>(a: &T, b: &T) -> T {
    a.checked_mul(b).expect("integer overflow in exact arithmetic")
}

pub(crate) fn cneg<T: Scalar>(a: &T) -> T {
    csub(&T::zero(), a)
}

/// Division known to be exact; checked in debug builds.
pub(crate) fn exact_div<T: Scalar>(a: &T, b: &T) -> T {
    debug_assert!(!b.is_zero());
    let (q, r) = a.div_rem(b);
    debug_assert!(r.is_zero(), "division was not exact");
    q
}

/// Extended gcd: returns `(g, x, y)` with `g = gcd(a, b) >= 0` and
/// `x*a + y*b = g`. Deterministic for all sign combinations.
pub(crate) fn egcd<T: Scalar>(a: &T, b: &T) -> (T, T, T) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (T::one(), T::zero());
    let (mut t0, mut t1) = (T::zero(), T::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let s = csub(&s0, &cmul(&q, &s1));
        s0 = std::mem::replace(&mut s1, s);
        let t = csub(&t0, &cmul(&q, &t1));
        t0 = std::mem::replace(&mut t1, t);
    }
    if r0.is_negative() {
        (cneg(&r0), cneg(&s0), cneg(&t0))
    } else {
        (r0, s0, t0)
    }
}

/// Dense row-major matrix. Rows or columns may be zero; entries are exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds a matrix from rows. Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Matrix { rows: nrows, cols: ncols, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_vec(&self, i: usize) -> Vec<T> {
        (0..self.cols).map(|j| self[(i, j)].clone()).collect()
    }

    pub fn col_vec(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                acc = cadd(&acc, &cmul(&self[(i, k)], &other[(k, j)]));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for j in 0..self.cols {
                    acc = cadd(&acc, &cmul(&self[(i, j)], &v[j]));
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| cadd(&self[(i, j)], &other[(i, j)]))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| csub(&self[(i, j)], &other[(i, j)]))
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| cneg(&self[(i, j)]))
    }

    /// Stacks `other` below `self`. Column counts must agree.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = cneg(&self[(i, j)]);
        }
    }

    /// row[dst] -= q * row[src]
    pub(crate) fn row_subtract(&mut self, dst: usize, src: usize, q: &T) {
        for j in 0..self.cols {
            let v = csub(&self[(dst, j)], &cmul(q, &self[(src, j)]));
            self[(dst, j)] = v;
        }
    }

    /// col[dst] -= q * col[src]
    pub(crate) fn col_subtract(&mut self, dst: usize, src: usize, q: &T) {
        for i in 0..self.rows {
            let v = csub(&self[(i, dst)], &cmul(q, &self[(i, src)]));
            self[(i, dst)] = v;
        }
    }

    /// Left-multiplies rows (a, b) by the 2x2 matrix [[p, q], [r, s]].
    pub(crate) fn row_transform(&mut self, a: usize, b: usize, p: &T, q: &T, r: &T, s: &T) {
        for j in 0..self.cols {
            let x = self[(a, j)].clone();
            let y = self[(b, j)].clone();
            self[(a, j)] = cadd(&cmul(p, &x), &cmul(q, &y));
            self[(b, j)] = cadd(&cmul(r, &x), &cmul(s, &y));
        }
    }

    /// Right-multiplies columns (a, b) by the 2x2 matrix [[p, r], [q, s]],
    /// i.e. new col a = p*col a + q*col b, new col b = r*col a + s*col b.
    pub(crate) fn col_transform(&mut self, a: usize, b: usize, p: &T, q: &T, r: &T, s: &T) {
        for i in 0..self.rows {
            let x = self[(i, a)].clone();
            let y = self[(i, b)].clone();
            self[(i, a)] = cadd(&cmul(p, &x), &cmul(q, &y));
            self[(i, b)] = cadd(&cmul(r, &x), &cmul(s, &y));
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination. Panics if not
    /// square. Independent of the Smith normal form code path, so the tests
    /// can use it as an oracle for unimodularity.
    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return T::one();
        }
        let mut a = self.clone();
        let mut prev = T::one();
        let mut negate = false;
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        negate = !negate;
                    }
                    None => return T::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = csub(&cmul(&a[(k, k)], &a[(i, j)]), &cmul(&a[(i, k)], &a[(k, j)]));
                    a[(i, j)] = exact_div(&num, &prev);
                }
                a[(i, k)] = T::zero();
            }
            prev = a[(k, k)].clone();
        }
        let d = a[(n - 1, n - 1)].clone();
        if negate {
            cneg(&d)
        } else {
            d
        }
    }

    /// Rank over the rationals, by fraction-free elimination. Also independent
    /// of the Smith normal form path.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let (rows, cols) = (a.rows, a.cols);
        let mut prev = T::one();
        let mut r = 0;
        for j in 0..cols {
            if r == rows {
                break;
            }
            let pivot = match (r..rows).find(|&i| !a[(i, j)].is_zero()) {
                Some(i) => i,
                None => continue,
            };
            a.swap_rows(r, pivot);
            for i in r + 1..rows {
                for jj in j + 1..cols {
                    let num = csub(&cmul(&a[(r, j)], &a[(i, jj)]), &cmul(&a[(i, j)], &a[(r, jj)]));
                    a[(i, jj)] = exact_div(&num, &prev);
                }
                a[(i, j)] = T::zero();
            }
            prev = a[(r, j)].clone();
            r += 1;
        }
        r
    }
}

use num_traits::Zero;

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
