use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maps a storage index along an axis of length `n` to its signed frequency
/// (or spatial offset) in `[-n/2, n/2)`.
#[inline]
pub fn centered(k: usize, n: usize) -> i64 {
    if k < n.div_ceil(2) {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Inverse of [`centered`]: wraps a signed frequency back onto `0..n`.
#[inline]
pub fn storage(f: i64, n: usize) -> usize {
    f.rem_euclid(n as i64) as usize
}

fn check_dims(rows: usize, cols: usize, len: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidDimensions(format!(
            "grid must be at least 1x1, got {rows}x{cols}"
        )));
    }
    if rows * cols != len {
        return Err(Error::InvalidDimensions(format!(
            "{rows}x{cols} grid needs {} samples, got {len}",
            rows * cols
        )));
    }
    Ok(())
}

/// Row-major real raster.
#[derive(Clone, Debug, PartialEq)]
pub struct RealGrid {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealGrid {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        check_dims(rows, cols, data.len())?;
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "grid must be at least 1x1");
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut g = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                g.data[i * cols + j] = f(i, j);
            }
        }
        g
    }

    /// Wraps data the caller guarantees is finite and correctly sized.
    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(rows * cols, data.len());
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_complex(&self) -> ComplexGrid {
        ComplexGrid {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }

    pub fn norm_l2(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest absolute pointwise difference. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &RealGrid) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn transpose(&self) -> RealGrid {
        RealGrid::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }
}

/// Row-major complex raster. Spectra keep DC at storage index (0, 0); see
/// [`centered`] for the signed-frequency view.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexGrid {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexGrid {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        check_dims(rows, cols, data.len())?;
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "grid must be at least 1x1");
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Self {
        let mut g = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                g.data[i * cols + j] = f(i, j);
            }
        }
        g
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(rows * cols, data.len());
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    /// Value at signed frequency `(n1, n2)`.
    pub fn at_freq(&self, n1: i64, n2: i64) -> Complex64 {
        self.get(storage(n1, self.rows), storage(n2, self.cols))
    }

    pub fn re(&self) -> RealGrid {
        RealGrid::from_raw(self.rows, self.cols, self.data.iter().map(|c| c.re).collect())
    }

    pub fn im(&self) -> RealGrid {
        RealGrid::from_raw(self.rows, self.cols, self.data.iter().map(|c| c.im).collect())
    }

    pub fn norm_l2(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn max_abs_diff(&self, other: &ComplexGrid) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn transpose(&self) -> ComplexGrid {
        ComplexGrid::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Pointwise product. Errors on shape mismatch.
    pub fn hadamard(&self, other: &ComplexGrid) -> Result<ComplexGrid> {
        same_shape(self.shape(), other.shape())?;
        Ok(ComplexGrid::from_raw(
            self.rows,
            self.cols,
            self.data.iter().zip(&other.data).map(|(a, b)| a * b).collect(),
        ))
    }
}

impl From<&RealGrid> for ComplexGrid {
    fn from(g: &RealGrid) -> Self {
        g.to_complex()
    }
}

pub(crate) fn same_shape(a: (usize, usize), b: (usize, usize)) -> Result<()> {
    if a != b {
        return Err(Error::ShapeMismatch { left: a, right: b });
    }
    Ok(())
}
