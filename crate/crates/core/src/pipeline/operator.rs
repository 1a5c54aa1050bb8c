//! Per-shear measurement operators `c ↦ P F R S W* c` on real coefficients.

use num_complex::Complex64;

use crate::error::Result;
use crate::filter_bank::{DigitalShear, ShearIndex, Wavelet2d};
use crate::l1::LinearMap;
use crate::spectral::Fft2Plan;

pub(crate) fn transpose_in_place(data: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in i + 1..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

/// Maps real wavelet coefficients to unitary Fourier samples on a support:
/// wavelet synthesis, digital shear about the center column, an optional
/// transpose (vertical cone), then the orthonormal 2-D DFT. The adjoint is
/// taken in the real inner product, so its output is real. With a
/// conjugation-symmetric support the rows are orthonormal.
pub struct SynthesisOperator {
    n: usize,
    support: Vec<usize>,
    shear: Option<DigitalShear>,
    transpose: bool,
    wavelet: Wavelet2d,
    plan: Fft2Plan,
}

impl SynthesisOperator {
    pub fn new(
        n: usize,
        support: Vec<usize>,
        shear: ShearIndex,
        transpose: bool,
        wavelet: Wavelet2d,
    ) -> Result<Self> {
        let shear = if shear.q() == 0 {
            None
        } else {
            Some(DigitalShear::new(n, shear, n / 2)?)
        };
        Ok(Self {
            n,
            support,
            shear,
            transpose,
            wavelet,
            plan: Fft2Plan::new(n, n),
        })
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// `R S W* c` as a full image.
    pub fn synthesize(&self, c: &[Complex64]) -> Vec<Complex64> {
        let mut re: Vec<f64> = c.iter().map(|v| v.re).collect();
        self.wavelet.inverse_in_place(&mut re);
        let mut buf: Vec<Complex64> = re.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
        if let Some(s) = &self.shear {
            s.apply(&mut buf, false);
        }
        if self.transpose {
            transpose_in_place(&mut buf, self.n);
        }
        buf
    }

    /// Real part of `W S⁻¹ R image`.
    pub fn analyze(&self, image: &mut [Complex64]) -> Vec<Complex64> {
        if self.transpose {
            transpose_in_place(image, self.n);
        }
        if let Some(s) = &self.shear {
            s.apply(image, true);
        }
        let mut re: Vec<f64> = image.iter().map(|v| v.re).collect();
        self.wavelet.forward_in_place(&mut re);
        re.into_iter().map(|v| Complex64::new(v, 0.0)).collect()
    }
}

impl LinearMap for SynthesisOperator {
    fn input_dim(&self) -> usize {
        self.n * self.n
    }

    fn output_dim(&self) -> usize {
        self.support.len()
    }

    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut buf = self.synthesize(x);
        self.plan.forward(&mut buf);
        let scale = 1.0 / self.n as f64;
        self.support.iter().map(|&k| buf[k] * scale).collect()
    }

    fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.n * self.n];
        for (&k, &v) in self.support.iter().zip(y) {
            buf[k] = v;
        }
        self.plan.inverse(&mut buf);
        let scale = self.n as f64;
        buf.iter_mut().for_each(|v| *v *= scale);
        self.analyze(&mut buf)
    }

    fn solve_gram(&self, r: &[Complex64]) -> Vec<Complex64> {
        r.to_vec()
    }
}
