//! 2-D discrete Fourier transform and circular convolution.
//!
//! Convention: the forward transform is unnormalized,
//! `U(k) = Σ_n u(n) exp(-2πi n·k / N)`, and the inverse carries the
//! `1/(rows·cols)` factor. Spectra keep DC at storage index `(0, 0)`;
//! [`centered`](super::centered) gives the signed frequency of a storage index.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::{same_shape, ComplexGrid, RealGrid};
use crate::error::{Error, Result};

/// Reusable forward/inverse plans for a fixed grid shape.
#[derive(Clone)]
pub struct Fft2Plan {
    rows: usize,
    cols: usize,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Fft2Plan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fft2Plan")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .finish()
    }
}

impl Fft2Plan {
    pub fn new(rows: usize, cols: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            rows,
            cols,
            row_fwd: planner.plan_fft_forward(cols),
            row_inv: planner.plan_fft_inverse(cols),
            col_fwd: planner.plan_fft_forward(rows),
            col_inv: planner.plan_fft_inverse(rows),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Unnormalized forward transform in place.
    pub fn forward(&self, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.rows * self.cols);
        self.row_fwd.process(data);
        self.along_axis0(data, &self.col_fwd);
    }

    /// Inverse transform in place, including the `1/(rows·cols)` factor.
    pub fn inverse(&self, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.rows * self.cols);
        self.row_inv.process(data);
        self.along_axis0(data, &self.col_inv);
        let scale = 1.0 / (self.rows * self.cols) as f64;
        data.iter_mut().for_each(|c| *c *= scale);
    }

    /// Unnormalized 1-D forward transform down every column.
    pub fn forward_axis0(&self, data: &mut [Complex64]) {
        self.along_axis0(data, &self.col_fwd);
    }

    /// 1-D inverse transform down every column, with the `1/rows` factor.
    pub fn inverse_axis0(&self, data: &mut [Complex64]) {
        self.along_axis0(data, &self.col_inv);
        let scale = 1.0 / self.rows as f64;
        data.iter_mut().for_each(|c| *c *= scale);
    }

    fn along_axis0(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let (rows, cols) = (self.rows, self.cols);
        if rows == 1 {
            return;
        }
        let mut t = vec![Complex64::new(0.0, 0.0); rows * cols];
        for i in 0..rows {
            for j in 0..cols {
                t[j * rows + i] = data[i * cols + j];
            }
        }
        fft.process(&mut t);
        for j in 0..cols {
            for i in 0..rows {
                data[i * cols + j] = t[j * rows + i];
            }
        }
    }
}

fn check_finite(g: &ComplexGrid) -> Result<()> {
    match g.data().iter().position(|c| !c.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// Unnormalized forward 2-D DFT.
pub fn dft2(u: &ComplexGrid) -> Result<ComplexGrid> {
    check_finite(u)?;
    let mut data = u.data().to_vec();
    Fft2Plan::new(u.rows(), u.cols()).forward(&mut data);
    Ok(ComplexGrid::from_raw(u.rows(), u.cols(), data))
}

/// Forward 2-D DFT of a real grid.
pub fn dft2_real(u: &RealGrid) -> Result<ComplexGrid> {
    dft2(&u.to_complex())
}

/// Inverse 2-D DFT (carries the `1/(rows·cols)` factor).
pub fn idft2(spectrum: &ComplexGrid) -> Result<ComplexGrid> {
    check_finite(spectrum)?;
    let mut data = spectrum.data().to_vec();
    Fft2Plan::new(spectrum.rows(), spectrum.cols()).inverse(&mut data);
    Ok(ComplexGrid::from_raw(spectrum.rows(), spectrum.cols(), data))
}

/// Circular convolution `(u ⋆ h)(n) = Σ_m u(m) h(n - m)` computed through the DFT.
pub fn circ_conv(u: &RealGrid, h: &RealGrid) -> Result<RealGrid> {
    same_shape(u.shape(), h.shape())?;
    let plan = Fft2Plan::new(u.rows(), u.cols());
    let mut a = u.to_complex().into_data();
    let mut b = h.to_complex().into_data();
    plan.forward(&mut a);
    plan.forward(&mut b);
    a.iter_mut().zip(&b).for_each(|(x, y)| *x *= y);
    plan.inverse(&mut a);
    Ok(RealGrid::from_raw(
        u.rows(),
        u.cols(),
        a.into_iter().map(|c| c.re).collect(),
    ))
}

/// Circular convolution of a real grid with a filter given by its spectrum.
pub fn filter_with_spectrum(u: &ComplexGrid, spectrum: &ComplexGrid) -> Result<ComplexGrid> {
    same_shape(u.shape(), spectrum.shape())?;
    let plan = Fft2Plan::new(u.rows(), u.cols());
    let mut a = u.data().to_vec();
    plan.forward(&mut a);
    a.iter_mut().zip(spectrum.data()).for_each(|(x, y)| *x *= y);
    plan.inverse(&mut a);
    Ok(ComplexGrid::from_raw(u.rows(), u.cols(), a))
}
