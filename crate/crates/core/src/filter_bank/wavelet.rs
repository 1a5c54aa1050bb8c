//! Periodized orthonormal wavelet transforms on power-of-two grids.

use crate::error::{Error, Result};
use crate::spectral::RealGrid;

/// Daubechies 8-tap (four vanishing moments) scaling filter.
#[allow(clippy::excessive_precision)]
const DB4: [f64; 8] = [
    0.230_377_813_308_896_500_86,
    0.714_846_570_552_915_647_09,
    0.630_880_767_929_858_907_88,
    -0.027_983_769_416_859_854_211,
    -0.187_034_811_719_093_084_08,
    0.030_841_381_835_560_763_627,
    0.032_883_011_666_885_199_735,
    -0.010_597_401_785_069_032_105,
];

/// An orthonormal conjugate-quadrature filter pair.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveletPair {
    lowpass: Vec<f64>,
    highpass: Vec<f64>,
}

impl WaveletPair {
    /// Builds the pair from scaling taps; the high-pass is `g[k] = (-1)^k h[L-1-k]`.
    pub fn from_lowpass(taps: &[f64]) -> Result<Self> {
        if taps.is_empty() || taps.len() % 2 == 1 {
            return Err(Error::InvalidParameter("filter needs an even, nonzero tap count".into()));
        }
        let l = taps.len();
        let highpass = (0..l)
            .map(|k| if k % 2 == 0 { taps[l - 1 - k] } else { -taps[l - 1 - k] })
            .collect();
        Ok(Self {
            lowpass: taps.to_vec(),
            highpass,
        })
    }

    pub fn daubechies8() -> Self {
        Self::from_lowpass(&DB4).unwrap()
    }

    pub fn haar() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_lowpass(&[h, h]).unwrap()
    }

    pub fn taps(&self) -> usize {
        self.lowpass.len()
    }

    pub fn lowpass(&self) -> &[f64] {
        &self.lowpass
    }

    pub fn highpass(&self) -> &[f64] {
        &self.highpass
    }

    /// One analysis step on `x` (even length); writes approximations to the
    /// first half of `out` and details to the second half.
    fn analyze(&self, x: &[f64], out: &mut [f64]) {
        let n = x.len();
        let half = n / 2;
        for k in 0..half {
            let (mut a, mut d) = (0.0, 0.0);
            for (m, (h, g)) in self.lowpass.iter().zip(&self.highpass).enumerate() {
                let v = x[(2 * k + m) % n];
                a += h * v;
                d += g * v;
            }
            out[k] = a;
            out[half + k] = d;
        }
    }

    fn synthesize(&self, c: &[f64], out: &mut [f64]) {
        let n = c.len();
        let half = n / 2;
        out.iter_mut().for_each(|v| *v = 0.0);
        for k in 0..half {
            let (a, d) = (c[k], c[half + k]);
            for (m, (h, g)) in self.lowpass.iter().zip(&self.highpass).enumerate() {
                out[(2 * k + m) % n] += h * a + g * d;
            }
        }
    }
}

/// Which axes are split at one level of the pyramid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Split {
    pub axis0: bool,
    pub axis1: bool,
}

/// 2-D pyramid transform. At each level the current low band is split along
/// the axes flagged in the schedule; coefficients are stored in place with
/// the coarsest approximation in the top-left corner.
#[derive(Clone, Debug)]
pub struct Wavelet2d {
    pair: WaveletPair,
    rows: usize,
    cols: usize,
    schedule: Vec<Split>,
}

impl Wavelet2d {
    pub fn new(pair: WaveletPair, rows: usize, cols: usize, schedule: Vec<Split>) -> Result<Self> {
        if !rows.is_power_of_two() || !cols.is_power_of_two() {
            return Err(Error::InvalidDimensions(format!(
                "wavelet grids need power-of-two sides, got {rows}x{cols}"
            )));
        }
        let d0 = schedule.iter().filter(|s| s.axis0).count() as u32;
        let d1 = schedule.iter().filter(|s| s.axis1).count() as u32;
        if d0 > rows.trailing_zeros() || d1 > cols.trailing_zeros() {
            return Err(Error::InvalidParameter(format!(
                "depths ({d0}, {d1}) exceed log2 of the grid {rows}x{cols}"
            )));
        }
        Ok(Self {
            pair,
            rows,
            cols,
            schedule,
        })
    }

    /// Parabolic scaling: `depth` splits along the first axis and
    /// `ceil(depth/2)` along the second (on odd levels).
    pub fn anisotropic(pair: WaveletPair, n: usize, depth: u32) -> Result<Self> {
        let schedule = (1..=depth)
            .map(|l| Split {
                axis0: true,
                axis1: l % 2 == 1,
            })
            .collect();
        Self::new(pair, n, n, schedule)
    }

    /// Standard square pyramid: both axes split at every level.
    pub fn isotropic(pair: WaveletPair, n: usize, depth: u32) -> Result<Self> {
        let schedule = (0..depth)
            .map(|_| Split {
                axis0: true,
                axis1: true,
            })
            .collect();
        Self::new(pair, n, n, schedule)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn schedule(&self) -> &[Split] {
        &self.schedule
    }

    /// Depth along each axis.
    pub fn depths(&self) -> (u32, u32) {
        (
            self.schedule.iter().filter(|s| s.axis0).count() as u32,
            self.schedule.iter().filter(|s| s.axis1).count() as u32,
        )
    }

    fn split_axis0(&self, data: &mut [f64], r: usize, c: usize, inverse: bool) {
        let mut col = vec![0.0; r];
        let mut out = vec![0.0; r];
        for j in 0..c {
            for i in 0..r {
                col[i] = data[i * self.cols + j];
            }
            if inverse {
                self.pair.synthesize(&col, &mut out);
            } else {
                self.pair.analyze(&col, &mut out);
            }
            for i in 0..r {
                data[i * self.cols + j] = out[i];
            }
        }
    }

    fn split_axis1(&self, data: &mut [f64], r: usize, c: usize, inverse: bool) {
        let mut out = vec![0.0; c];
        for i in 0..r {
            let row = &mut data[i * self.cols..i * self.cols + c];
            if inverse {
                self.pair.synthesize(row, &mut out);
            } else {
                self.pair.analyze(row, &mut out);
            }
            row.copy_from_slice(&out);
        }
    }

    /// Analysis in place on a row-major `rows×cols` buffer.
    pub fn forward_in_place(&self, data: &mut [f64]) {
        debug_assert_eq!(data.len(), self.rows * self.cols);
        let (mut r, mut c) = (self.rows, self.cols);
        for s in &self.schedule {
            if s.axis0 {
                self.split_axis0(data, r, c, false);
            }
            if s.axis1 {
                self.split_axis1(data, r, c, false);
            }
            if s.axis0 {
                r /= 2;
            }
            if s.axis1 {
                c /= 2;
            }
        }
    }

    /// Synthesis in place; exact inverse (and adjoint) of [`forward_in_place`](Self::forward_in_place).
    pub fn inverse_in_place(&self, data: &mut [f64]) {
        debug_assert_eq!(data.len(), self.rows * self.cols);
        let mut sizes = Vec::with_capacity(self.schedule.len());
        let (mut r, mut c) = (self.rows, self.cols);
        for s in &self.schedule {
            sizes.push((r, c));
            if s.axis0 {
                r /= 2;
            }
            if s.axis1 {
                c /= 2;
            }
        }
        for (s, &(r, c)) in self.schedule.iter().zip(&sizes).rev() {
            if s.axis1 {
                self.split_axis1(data, r, c, true);
            }
            if s.axis0 {
                self.split_axis0(data, r, c, true);
            }
        }
    }

    pub fn forward(&self, u: &RealGrid) -> Result<RealGrid> {
        crate::spectral::same_shape(u.shape(), self.shape())?;
        let mut data = u.data().to_vec();
        self.forward_in_place(&mut data);
        Ok(RealGrid::from_raw(self.rows, self.cols, data))
    }

    pub fn inverse(&self, c: &RealGrid) -> Result<RealGrid> {
        crate::spectral::same_shape(c.shape(), self.shape())?;
        let mut data = c.data().to_vec();
        self.inverse_in_place(&mut data);
        Ok(RealGrid::from_raw(self.rows, self.cols, data))
    }

    /// Size of the coarsest approximation block.
    pub fn approximation_shape(&self) -> (usize, usize) {
        let (d0, d1) = self.depths();
        (self.rows >> d0, self.cols >> d1)
    }
}

/// Anisotropic coefficients together with the depth that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveletCoefficients {
    pub depth: u32,
    pub field: RealGrid,
}

/// Anisotropic wavelet analysis `W_J u` with depth `J` along the first axis
/// and `ceil(J/2)` along the second.
pub fn awt_forward(u: &RealGrid, depth: u32) -> Result<WaveletCoefficients> {
    let (r, c) = u.shape();
    if r != c {
        return Err(Error::InvalidDimensions(format!("expected a square grid, got {r}x{c}")));
    }
    let w = Wavelet2d::anisotropic(WaveletPair::daubechies8(), r, depth)?;
    Ok(WaveletCoefficients {
        depth,
        field: w.forward(u)?,
    })
}

/// Synthesis `W*_J c`.
pub fn awt_inverse(c: &WaveletCoefficients) -> Result<RealGrid> {
    let n = c.field.rows();
    if c.field.cols() != n {
        return Err(Error::InvalidDimensions("expected a square coefficient field".into()));
    }
    let w = Wavelet2d::anisotropic(WaveletPair::daubechies8(), n, c.depth)?;
    w.inverse(&c.field)
}
