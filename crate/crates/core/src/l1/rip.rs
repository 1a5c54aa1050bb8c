//! Weighted measurement matrices and restricted isometry estimates.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::oracle::for_each_subset;
use super::DenseMatrix;
use crate::error::{Error, Result};
use crate::spectral::{storage, ComplexGrid};

pub const RIP_MAX_COLS: usize = 24;
pub const RIP_MAX_SPARSITY: usize = 4;

/// Rows `σ̂_λ(n) / sqrt(m · p(n))` for the sampled frequencies `n`, one column
/// per synthesis spectrum `σ̂_λ` (unitary normalization, DC at index 0).
pub fn weighted_matrix(
    points: &[[i64; 2]],
    prob: &dyn Fn(i64, i64) -> f64,
    count: usize,
    columns: &[ComplexGrid],
) -> Result<DenseMatrix> {
    if points.is_empty() || columns.is_empty() {
        return Err(Error::InvalidDimensions("no sampled points or no columns".into()));
    }
    let n = columns[0].rows();
    if let Some(c) = columns.iter().find(|c| c.shape() != (n, n)) {
        return Err(Error::ShapeMismatch {
            left: c.shape(),
            right: (n, n),
        });
    }
    let mut weights = Vec::with_capacity(points.len());
    for &[a, b] in points {
        let p = prob(a, b);
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "density {p} at sampled frequency ({a}, {b}) must be positive"
            )));
        }
        weights.push(1.0 / (count as f64 * p).sqrt());
    }
    let m = DMatrix::from_fn(points.len(), columns.len(), |i, j| {
        let [a, b] = points[i];
        columns[j].get(storage(a, n), storage(b, n)) * weights[i]
    });
    DenseMatrix::new(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RipKind {
    Exact,
    LowerBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RipEstimate {
    pub k: usize,
    pub delta: f64,
    pub kind: RipKind,
    pub supports: usize,
}

fn spectral_deviation(a: &DMatrix<Complex64>, support: &[usize]) -> f64 {
    let k = support.len();
    let gram = DMatrix::from_fn(k, k, |i, j| {
        let ci = a.column(support[i]);
        let cj = a.column(support[j]);
        let v: Complex64 = ci.iter().zip(cj.iter()).map(|(x, y)| x.conj() * y).sum();
        if i == j {
            v - 1.0
        } else {
            v
        }
    });
    gram.symmetric_eigenvalues().iter().fold(0.0f64, |m, &e| m.max(e.abs()))
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// `δ_k = max_{#S ≤ k} ‖A_S* A_S - I‖₂` over every support.
pub fn rip_constant(a: &DenseMatrix, k: usize) -> Result<RipEstimate> {
    let n = a.cols();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("sparsity {k} must lie in 1..={n}")));
    }
    if n > RIP_MAX_COLS || k > RIP_MAX_SPARSITY {
        return Err(Error::TooLarge(format!(
            "exhaustive RIP needs at most {RIP_MAX_COLS} columns and k <= {RIP_MAX_SPARSITY}"
        )));
    }
    let mut delta = 0.0f64;
    let mut supports = 0;
    for size in 1..=k {
        for_each_subset(n, size, |s| {
            delta = delta.max(spectral_deviation(a.matrix(), s));
            supports += 1;
        });
    }
    Ok(RipEstimate {
        k,
        delta,
        kind: RipKind::Exact,
        supports,
    })
}

/// Lower bound on `δ_k` from `trials` random supports of size `k`. When
/// `trials` covers every support they are all scanned and the value is exact.
pub fn rip_constant_sampled(a: &DenseMatrix, k: usize, trials: usize, seed: u64) -> Result<RipEstimate> {
    let n = a.cols();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("sparsity {k} must lie in 1..={n}")));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is needed".into()));
    }
    if binomial(n, k) <= trials as u128 {
        let mut delta = 0.0f64;
        let mut supports = 0;
        for_each_subset(n, k, |s| {
            delta = delta.max(spectral_deviation(a.matrix(), s));
            supports += 1;
        });
        return Ok(RipEstimate {
            k,
            delta,
            kind: RipKind::Exact,
            supports,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut delta = 0.0f64;
    for _ in 0..trials {
        let mut s = sample(&mut rng, n, k).into_vec();
        s.sort_unstable();
        delta = delta.max(spectral_deviation(a.matrix(), &s));
    }
    Ok(RipEstimate {
        k,
        delta,
        kind: RipKind::LowerBound,
        supports: trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthonormal_columns() {
        let f = DenseMatrix::partial_dft(12, &(0..12).collect::<Vec<_>>()).unwrap();
        for k in 1..=3 {
            assert!(rip_constant(&f, k).unwrap().delta <= 1e-12);
        }
    }

    #[test]
    fn duplicate_columns() {
        let a = DenseMatrix::from_real_rows(2, 2, &[1.0, 1.0, 0.0, 0.0]).unwrap();
        let r = rip_constant(&a, 2).unwrap();
        assert!((r.delta - 1.0).abs() < 1e-12);
        assert_eq!(r.kind, RipKind::Exact);
        assert_eq!(r.supports, 3);
    }

    #[test]
    fn monotone_in_k_and_modes_agree() {
        let data: Vec<f64> = (0..96).map(|i| (((i * 53 + 7) % 31) as f64 - 15.0) / 12.0).collect();
        let a = DenseMatrix::from_real_rows(8, 12, &data).unwrap();
        let d: Vec<f64> = (1..=4).map(|k| rip_constant(&a, k).unwrap().delta).collect();
        assert!(d.windows(2).all(|w| w[0] <= w[1]));
        let all = rip_constant_sampled(&a, 3, 220, 0).unwrap();
        assert_eq!(all.kind, RipKind::Exact);
        assert!((all.delta - d[2]).abs() < 1e-12);
        let some = rip_constant_sampled(&a, 3, 20, 0).unwrap();
        assert_eq!(some.kind, RipKind::LowerBound);
        assert!(some.delta <= d[2] + 1e-12);
    }

    #[test]
    fn limits() {
        let a = DenseMatrix::partial_dft(30, &[0, 1]).unwrap();
        assert!(matches!(rip_constant(&a, 2), Err(Error::TooLarge(_))));
        assert!(rip_constant_sampled(&a, 2, 10, 1).is_ok());
        let b = DenseMatrix::partial_dft(4, &[0, 1]).unwrap();
        assert!(rip_constant(&b, 5).is_err());
        assert!(rip_constant(&b, 0).is_err());
    }

    #[test]
    fn weighting_scales_entries() {
        let col = ComplexGrid::from_fn(4, 4, |i, j| Complex64::new(i as f64 + 1.0, j as f64));
        let pts = [[0, 0], [1, -1], [-2, 1]];
        let base = weighted_matrix(&pts, &|_, _| 0.25, 1, std::slice::from_ref(&col)).unwrap();
        let scaled = weighted_matrix(&pts, &|_, _| 1.0, 1, std::slice::from_ref(&col)).unwrap();
        for (x, y) in base.matrix().iter().zip(scaled.matrix().iter()) {
            assert!((x * 0.5 - y).norm() < 1e-15);
        }
        assert!(weighted_matrix(&pts, &|_, _| 0.0, 1, &[col]).is_err());
    }
}
