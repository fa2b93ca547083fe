//! Integer and modular kernels, derived from the Smith normal form.

use super::{smith_normal_form, LinalgError, Matrix, Scalar};
use num_integer::Integer;

/// Basis of `{x : a·x = 0}` as a free abelian group: the columns of the Smith
/// `v` whose diagonal entry is zero (or missing). Deterministic given the
/// input; possibly empty.
pub fn integer_kernel_basis<T: Scalar>(a: &Matrix<T>) -> Vec<Vec<T>> {
    let snf = smith_normal_form(a);
    (0..a.cols())
        .filter(|&j| j >= a.rows() || snf.d[(j, j)].is_zero())
        .map(|j| snf.v.col_vec(j))
        .collect()
}

fn mod_u64<T: Scalar>(x: &T, n: u64) -> u64 {
    let n_t = T::from_u64(n).expect("modulus fits the scalar");
    x.mod_floor(&n_t).to_u64().expect("floor residue is in [0, n)")
}

/// Generating set of `{x in (Z/n)^cols : a·x = 0 mod n}`.
///
/// Lifted from the Smith form: with `u·a·v = d`, substituting `x = v·y`
/// decouples the system into `d_j · y_j = 0 mod n`, whose solutions are the
/// multiples of `n / gcd(d_j, n)`. Each generator below is `(n/g)·v_j mod n`
/// and has order `g`; the subgroup they generate is the full solution set.
pub fn kernel_mod<T: Scalar>(a: &Matrix<T>, n: u64) -> Result<Vec<Vec<u64>>, LinalgError> {
    if n < 2 {
        return Err(LinalgError::ModulusTooSmall(n));
    }
    let snf = smith_normal_form(a);
    let mut gens = Vec::new();
    for j in 0..a.cols() {
        let d_mod = if j < a.rows() { mod_u64(&snf.d[(j, j)], n) } else { 0 };
        let g = d_mod.gcd(&n); // gcd(0, n) = n: free coordinate
        if g <= 1 {
            continue;
        }
        let scale = (n / g) as u128;
        let gen: Vec<u64> = (0..a.cols())
            .map(|i| ((mod_u64(&snf.v[(i, j)], n) as u128 * scale) % n as u128) as u64)
            .collect();
        gens.push(gen);
    }
    Ok(gens)
}
