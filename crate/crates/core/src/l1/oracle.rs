//! Exhaustive sparse ℓ1 oracle for small dense systems.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::map::norm;
use super::solver::l1_norm;
use super::DenseMatrix;
use crate::error::{Error, Result};

pub const ORACLE_MAX_ROWS: usize = 16;
pub const ORACLE_MAX_COLS: usize = 32;
pub const ORACLE_MAX_SPARSITY: usize = 4;
/// A candidate counts as feasible when `‖A_S x - y‖₂` is below this.
pub const ORACLE_FEASIBILITY: f64 = 1e-9;

/// Calls `visit` with every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Minimum-ℓ1 solution of `Ax = y` among all supports of size `≤ k_max`,
/// or `None` if no such support reproduces `y`.
pub fn brute_force_bp(a: &DenseMatrix, y: &[Complex64], k_max: usize) -> Result<Option<Vec<Complex64>>> {
    let (m, n) = (a.rows(), a.cols());
    if m > ORACLE_MAX_ROWS || n > ORACLE_MAX_COLS || k_max > ORACLE_MAX_SPARSITY {
        return Err(Error::TooLarge(format!(
            "{m}x{n} with k_max {k_max} exceeds {ORACLE_MAX_ROWS}x{ORACLE_MAX_COLS}, k <= {ORACLE_MAX_SPARSITY}"
        )));
    }
    if y.len() != m {
        return Err(Error::InvalidDimensions(format!("{} measurements for {m} rows", y.len())));
    }
    if norm(y) <= ORACLE_FEASIBILITY {
        return Ok(Some(vec![Complex64::new(0.0, 0.0); n]));
    }
    let full = a.matrix();
    let rhs = DVector::from_column_slice(y);
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    for k in 1..=k_max.min(n) {
        for_each_subset(n, k, |support| {
            let sub = DMatrix::from_fn(m, k, |i, j| full[(i, support[j])]);
            let Ok(coef) = sub.clone().svd(true, true).solve(&rhs, 1e-12) else {
                return;
            };
            let res = (&sub * &coef - &rhs).norm();
            if res > ORACLE_FEASIBILITY {
                return;
            }
            let mut x = vec![Complex64::new(0.0, 0.0); n];
            for (j, &col) in support.iter().enumerate() {
                x[col] = coef[j];
            }
            let obj = l1_norm(&x);
            if best.as_ref().is_none_or(|(b, _)| obj < *b) {
                best = Some((obj, x));
            }
        });
    }
    Ok(best.map(|(_, x)| x))
}
