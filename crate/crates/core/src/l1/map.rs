//! Linear measurement operators.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// A linear operator `A` together with its adjoint.
pub trait LinearMap: Send + Sync {
    fn input_dim(&self) -> usize;

    fn output_dim(&self) -> usize;

    fn apply(&self, x: &[Complex64]) -> Vec<Complex64>;

    fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64>;

    /// Solves `A A* z = r`. The default runs conjugate gradients; operators
    /// with orthonormal rows should return `r` unchanged.
    fn solve_gram(&self, r: &[Complex64]) -> Vec<Complex64> {
        conjugate_gradient(|v| self.apply(&self.apply_adjoint(v)), r, 500, 1e-15)
    }
}

fn conjugate_gradient(
    op: impl Fn(&[Complex64]) -> Vec<Complex64>,
    b: &[Complex64],
    max_iter: usize,
    tol: f64,
) -> Vec<Complex64> {
    let mut x = vec![Complex64::new(0.0, 0.0); b.len()];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rr = dot(&r, &r).re;
    let stop = tol * tol * rr.max(f64::MIN_POSITIVE);
    for _ in 0..max_iter {
        if rr <= stop {
            break;
        }
        let ap = op(&p);
        let denom = dot(&p, &ap).re;
        if denom <= 0.0 {
            break;
        }
        let alpha = rr / denom;
        x.iter_mut().zip(&p).for_each(|(x, p)| *x += alpha * p);
        r.iter_mut().zip(&ap).for_each(|(r, a)| *r -= alpha * a);
        let next = dot(&r, &r).re;
        let beta = next / rr;
        p.iter_mut().zip(&r).for_each(|(p, r)| *p = r + beta * *p);
        rr = next;
    }
    x
}

/// Largest relative violation of `<Ax, y> = <x, A*y>` over random probes.
pub fn adjoint_mismatch(map: &dyn LinearMap, probes: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut draw = |len: usize| -> Vec<Complex64> {
        (0..len)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect()
    };
    for _ in 0..probes {
        let x = draw(map.input_dim());
        let y = draw(map.output_dim());
        let ax = map.apply(&x);
        let aty = map.apply_adjoint(&y);
        let lhs = dot(&ax, &y);
        let rhs = dot(&x, &aty);
        let scale = (norm(&ax) * norm(&y)).max(norm(&x) * norm(&aty)).max(f64::MIN_POSITIVE);
        worst = worst.max((lhs - rhs).norm() / scale);
    }
    worst
}

/// A dense complex matrix.
#[derive(Clone, Debug)]
pub struct DenseMatrix {
    a: DMatrix<Complex64>,
    a_adj: DMatrix<Complex64>,
    gram_pinv: DMatrix<Complex64>,
}

impl DenseMatrix {
    pub fn new(a: DMatrix<Complex64>) -> Result<Self> {
        if a.nrows() == 0 || a.ncols() == 0 {
            return Err(Error::InvalidDimensions("matrix has an empty dimension".into()));
        }
        if let Some(index) = a.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let a_adj = a.adjoint();
        let gram = &a * &a_adj;
        let eps = 1e-13 * gram.norm().max(f64::MIN_POSITIVE);
        let gram_pinv = gram
            .svd(true, true)
            .pseudo_inverse(eps)
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        Ok(Self { a, a_adj, gram_pinv })
    }

    pub fn from_rows(rows: usize, cols: usize, data: &[Complex64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidDimensions(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(rows, cols, data))
    }

    pub fn from_real_rows(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        let c: Vec<Complex64> = data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Self::from_rows(rows, cols, &c)
    }

    /// `rows` of the unitary `n`-point DFT matrix.
    pub fn partial_dft(n: usize, rows: &[usize]) -> Result<Self> {
        if let Some(&r) = rows.iter().find(|&&r| r >= n) {
            return Err(Error::InvalidParameter(format!("row {r} outside a {n}-point DFT")));
        }
        let scale = 1.0 / (n as f64).sqrt();
        let a = DMatrix::from_fn(rows.len(), n, |i, j| {
            let t = -2.0 * std::f64::consts::PI * ((rows[i] * j) % n) as f64 / n as f64;
            Complex64::from_polar(scale, t)
        });
        Self::new(a)
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.a
    }

    pub fn rows(&self) -> usize {
        self.a.nrows()
    }

    pub fn cols(&self) -> usize {
        self.a.ncols()
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        self.a.column(j).iter().copied().collect()
    }
}

impl LinearMap for DenseMatrix {
    fn input_dim(&self) -> usize {
        self.a.ncols()
    }

    fn output_dim(&self) -> usize {
        self.a.nrows()
    }

    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        (&self.a * nalgebra::DVector::from_column_slice(x)).data.into()
    }

    fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        (&self.a_adj * nalgebra::DVector::from_column_slice(y)).data.into()
    }

    fn solve_gram(&self, r: &[Complex64]) -> Vec<Complex64> {
        (&self.gram_pinv * nalgebra::DVector::from_column_slice(r)).data.into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Scaled(DenseMatrix);

    impl LinearMap for Scaled {
        fn input_dim(&self) -> usize {
            self.0.input_dim()
        }
        fn output_dim(&self) -> usize {
            self.0.output_dim()
        }
        fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
            self.0.apply(x)
        }
        fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
            self.0.apply_adjoint(y)
        }
    }

    #[test]
    fn dense_adjoint_is_consistent() {
        let data: Vec<f64> = (0..35).map(|i| ((i * 7) % 11) as f64 - 5.0).collect();
        let a = DenseMatrix::from_real_rows(5, 7, &data).unwrap();
        assert!(adjoint_mismatch(&a, 10, 1) < 1e-12);
        let f = DenseMatrix::partial_dft(16, &[0, 3, 5, 9]).unwrap();
        assert!(adjoint_mismatch(&f, 10, 2) < 1e-12);
    }

    #[test]
    fn partial_dft_rows_are_orthonormal() {
        let f = DenseMatrix::partial_dft(24, &[1, 2, 7, 11, 20]).unwrap();
        let g = f.matrix() * f.matrix().adjoint();
        for i in 0..5 {
            for j in 0..5 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g[(i, j)] - Complex64::new(want, 0.0)).norm() < 1e-12);
            }
        }
        assert!(DenseMatrix::partial_dft(8, &[8]).is_err());
    }

    #[test]
    fn gram_solvers_agree() {
        let data: Vec<f64> = (0..40).map(|i| ((i * i + 3) % 13) as f64 - 6.0).collect();
        let a = DenseMatrix::from_real_rows(4, 10, &data).unwrap();
        let r: Vec<Complex64> = (0..4).map(|i| Complex64::new(i as f64 + 1.0, -0.5)).collect();
        let exact = a.solve_gram(&r);
        let cg = Scaled(a.clone()).solve_gram(&r);
        let back = a.apply(&a.apply_adjoint(&exact));
        assert!(norm(&back.iter().zip(&r).map(|(x, y)| x - y).collect::<Vec<_>>()) < 1e-9);
        let diff: Vec<Complex64> = exact.iter().zip(&cg).map(|(x, y)| x - y).collect();
        assert!(norm(&diff) < 1e-8 * norm(&exact));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(DenseMatrix::from_real_rows(2, 2, &[1.0; 3]).is_err());
        assert!(DenseMatrix::from_real_rows(1, 2, &[f64::NAN, 1.0]).is_err());
    }
}
