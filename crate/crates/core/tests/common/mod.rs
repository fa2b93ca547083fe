//! Shared oracle helpers for the integration suites. These stay independent
//! of the library code paths they check: brute force enumerations and
//! fraction-free determinants only.

use std::collections::BTreeSet;
use treebdy_core::linalg::{Matrix, Scalar};
use treebdy_core::generators::SplitMix64;
use treebdy_core::{Int, IntMatrix};

/// Brute-force solution set of `a·x = 0 mod n` over `(Z/n)^cols`.
#[allow(dead_code)] // each integration test binary uses its own subset
pub fn brute_kernel_mod<T: Scalar>(a: &Matrix<T>, n: u64) -> BTreeSet<Vec<u64>> {
    let cols = a.cols();
    let mut out = BTreeSet::new();
    let mut x = vec![0u64; cols];
    loop {
        let ok = (0..a.rows()).all(|i| {
            let mut acc: i128 = 0;
            for (j, &xj) in x.iter().enumerate() {
                let e = a[(i, j)].to_i128().expect("oracle entries are small");
                acc += e * xj as i128;
            }
            acc.rem_euclid(n as i128) == 0
        });
        if ok {
            out.insert(x.clone());
        }
        // odometer
        let mut i = cols;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            x[i] += 1;
            if x[i] < n {
                break;
            }
            x[i] = 0;
        }
    }
}

/// Subgroup of `(Z/n)^len` generated by `gens`, by closure under addition.
#[allow(dead_code)]
pub fn span_mod(gens: &[Vec<u64>], len: usize, n: u64) -> BTreeSet<Vec<u64>> {
    let mut set = BTreeSet::new();
    set.insert(vec![0u64; len]);
    let mut queue: Vec<Vec<u64>> = vec![vec![0u64; len]];
    while let Some(x) = queue.pop() {
        for g in gens {
            let y: Vec<u64> = x.iter().zip(g).map(|(a, b)| (a + b) % n).collect();
            if set.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    set
}

/// Random integer matrix with entries uniform in `[lo, hi]`.
#[allow(dead_code)]
pub fn random_matrix(rng: &mut SplitMix64, rows: usize, cols: usize, lo: i64, hi: i64) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| Int::from(rng.range_i64(lo, hi)))
}
