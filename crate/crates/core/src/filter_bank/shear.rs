//! Dyadic shear parameters and the digital shear operator.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{centered, ComplexGrid, Fft2Plan};

/// A dyadic shear `s = q / 2^level` stored in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShearIndex {
    q: i64,
    level: u32,
}

impl ShearIndex {
    pub const ZERO: ShearIndex = ShearIndex { q: 0, level: 0 };

    /// Builds `q / 2^level`, reducing to lowest terms. Rejects `|s| > 1`.
    pub fn new(q: i64, level: u32) -> Result<Self> {
        if level > 40 || q.unsigned_abs() > 1u64 << level {
            return Err(Error::InvalidParameter(format!(
                "shear {q}/2^{level} is outside [-1, 1]"
            )));
        }
        let (mut q, mut level) = (q, level);
        if q == 0 {
            level = 0;
        }
        while level > 0 && q % 2 == 0 {
            q /= 2;
            level -= 1;
        }
        Ok(Self { q, level })
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn value(&self) -> f64 {
        self.q as f64 / (1u64 << self.level) as f64
    }

    /// Smallest scale `j0` with `ceil(j0 / 2) == level`.
    pub fn generation_scale(&self) -> u32 {
        if self.level == 0 {
            0
        } else {
            2 * self.level - 1
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            q: -self.q,
            level: self.level,
        }
    }
}

impl fmt::Display for ShearIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.level == 0 {
            write!(f, "{}", self.q)
        } else {
            write!(f, "{}/{}", self.q, 1u64 << self.level)
        }
    }
}

impl PartialOrd for ShearIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ShearIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // exact comparison of q1/2^l1 and q2/2^l2
        let l = self.level.max(other.level);
        let a = (self.q as i128) << (l - self.level);
        let b = (other.q as i128) << (l - other.level);
        a.cmp(&b)
    }
}

/// Orientation of a directional filter: the horizontal cone holds the filters
/// built by shearing, the vertical cone their coordinate-swapped copies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cone {
    Horizontal,
    Vertical,
}

impl Cone {
    pub const BOTH: [Cone; 2] = [Cone::Horizontal, Cone::Vertical];

    pub fn id(&self) -> u64 {
        match self {
            Cone::Horizontal => 0,
            Cone::Vertical => 1,
        }
    }
}

/// The shears `q / 2^(J/2)` with `|q| < 2^(J/2)`, ascending.
pub fn shear_set(finest_scale: u32) -> Result<Vec<ShearIndex>> {
    if finest_scale == 0 || finest_scale % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "finest scale must be a positive even integer, got {finest_scale}"
        )));
    }
    let level = finest_scale / 2;
    let bound = 1i64 << level;
    (-bound + 1..bound).map(|q| ShearIndex::new(q, level)).collect()
}

pub(crate) fn check_square_pow2(shape: (usize, usize)) -> Result<usize> {
    let (r, c) = shape;
    if r != c || !r.is_power_of_two() {
        return Err(Error::InvalidDimensions(format!(
            "expected a square power-of-two grid, got {r}x{c}"
        )));
    }
    Ok(r)
}

/// Precomputed digital shear for one grid size, shear and pivot column.
///
/// Column `x2` (a signed offset from the pivot) is circularly shifted along
/// the first axis by `s·x2` using a linear phase ramp on its 1-D spectrum, so
/// `S(u)(x1, x2) = u(x1 + s·x2, x2)`. In the frequency domain this maps
/// `û(n1, n2)` to `û(n1, n2 - s·n1)` (band-limited). The Nyquist row uses the
/// sign of the ramp's real part, which keeps real inputs real and agrees with
/// the exact ramp whenever `s·x2` is an integer.
#[derive(Clone, Debug)]
pub struct DigitalShear {
    n: usize,
    shear: ShearIndex,
    ramp: Vec<Complex64>,
    plan: Fft2Plan,
}

impl DigitalShear {
    pub fn new(n: usize, shear: ShearIndex, pivot: usize) -> Result<Self> {
        check_square_pow2((n, n))?;
        let s = shear.value();
        let mut ramp = vec![Complex64::new(1.0, 0.0); n * n];
        for k1 in 0..n {
            let n1 = centered(k1, n) as f64;
            let nyquist = n > 1 && 2 * k1 == n;
            for j in 0..n {
                let x2 = centered((j + n - pivot % n) % n, n) as f64;
                ramp[k1 * n + j] = if nyquist {
                    let c = (std::f64::consts::PI * s * x2).cos();
                    Complex64::new(if c >= 0.0 { 1.0 } else { -1.0 }, 0.0)
                } else {
                    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * s * n1 * x2 / n as f64)
                };
            }
        }
        Ok(Self {
            n,
            shear,
            ramp,
            plan: Fft2Plan::new(n, n),
        })
    }

    pub fn shear(&self) -> ShearIndex {
        self.shear
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Applies the shear (or its inverse) in place to an `n×n` row-major buffer.
    pub fn apply(&self, data: &mut [Complex64], inverse: bool) {
        debug_assert_eq!(data.len(), self.n * self.n);
        if self.shear.q() == 0 {
            return;
        }
        self.plan.forward_axis0(data);
        if inverse {
            data.iter_mut().zip(&self.ramp).for_each(|(d, r)| *d *= r.conj());
        } else {
            data.iter_mut().zip(&self.ramp).for_each(|(d, r)| *d *= r);
        }
        self.plan.inverse_axis0(data);
    }
}

/// Digital shear about storage index `(0, 0)`.
pub fn digital_shear(u: &ComplexGrid, shear: ShearIndex, inverse: bool) -> Result<ComplexGrid> {
    digital_shear_about(u, shear, inverse, 0)
}

/// Digital shear whose fixed column is `pivot`.
pub fn digital_shear_about(
    u: &ComplexGrid,
    shear: ShearIndex,
    inverse: bool,
    pivot: usize,
) -> Result<ComplexGrid> {
    let n = check_square_pow2(u.shape())?;
    let op = DigitalShear::new(n, shear, pivot)?;
    let mut data = u.data().to_vec();
    op.apply(&mut data, inverse);
    Ok(ComplexGrid::from_raw(n, n, data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::RealGrid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(n: usize, seed: u64) -> ComplexGrid {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        RealGrid::from_fn(n, n, |_, _| rng.random::<f64>() - 0.5).to_complex()
    }

    #[test]
    fn shear_sets_match_dyadic_fractions() {
        let v: Vec<f64> = shear_set(2).unwrap().iter().map(|s| s.value()).collect();
        assert_eq!(v, vec![-0.5, 0.0, 0.5]);
        let v: Vec<f64> = shear_set(4).unwrap().iter().map(|s| s.value()).collect();
        assert_eq!(v, vec![-0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75]);
        assert_eq!(shear_set(6).unwrap().len(), 15);
        assert!(shear_set(3).is_err());
        assert!(shear_set(0).is_err());
    }

    #[test]
    fn shear_index_is_reduced() {
        let s = ShearIndex::new(-2, 2).unwrap();
        assert_eq!((s.q(), s.level()), (-1, 1));
        let z = ShearIndex::new(0, 3).unwrap();
        assert_eq!(z, ShearIndex::ZERO);
        assert!(ShearIndex::new(5, 2).is_err());
        assert_eq!(ShearIndex::new(3, 2).unwrap().generation_scale(), 3);
        assert_eq!(ShearIndex::new(1, 1).unwrap().generation_scale(), 1);
        assert_eq!(ShearIndex::ZERO.generation_scale(), 0);
        assert!(ShearIndex::new(-1, 1).unwrap() < ShearIndex::new(-1, 2).unwrap());
        assert_eq!(format!("{}", ShearIndex::new(-3, 2).unwrap()), "-3/4");
    }

    #[test]
    fn zero_shear_is_identity() {
        let u = random(16, 1);
        assert_eq!(digital_shear(&u, ShearIndex::ZERO, false).unwrap(), u);
    }

    #[test]
    fn integer_shear_permutes_the_lattice() {
        let n = 8;
        let s = ShearIndex::new(1, 0).unwrap();
        for (a, b) in [(0usize, 0usize), (2, 3), (5, 5), (1, 4), (7, 6)] {
            let mut u = ComplexGrid::zeros(n, n);
            u.set(a, b, Complex64::new(1.0, 0.0));
            let out = digital_shear(&u, s, false).unwrap();
            // S(u)(x1, x2) = u(x1 + x2, x2): the impulse moves to row a - x2.
            let x2 = centered(b, n);
            let row = (a as i64 - x2).rem_euclid(n as i64) as usize;
            let mut expect = ComplexGrid::zeros(n, n);
            expect.set(row, b, Complex64::new(1.0, 0.0));
            assert!(out.max_abs_diff(&expect) < 1e-12, "impulse at ({a},{b})");
        }
    }

    #[test]
    fn round_trip_isometry_and_realness() {
        let u = random(64, 2);
        for s in shear_set(4).unwrap() {
            let fwd = digital_shear(&u, s, false).unwrap();
            assert!(fwd.im().max_abs() < 1e-12, "shear {s} leaks imaginary part");
            assert!(((fwd.norm_l2() - u.norm_l2()) / u.norm_l2()).abs() < 1e-12);
            let back = digital_shear(&fwd, s, true).unwrap();
            let err = ComplexGrid::from_fn(64, 64, |i, j| back.get(i, j) - u.get(i, j)).norm_l2();
            assert!(err / u.norm_l2() <= 1e-8);
        }
    }

    #[test]
    fn inverse_equals_negated_shear() {
        let u = random(32, 3);
        let s = ShearIndex::new(3, 2).unwrap();
        let a = digital_shear_about(&u, s, true, 16).unwrap();
        let b = digital_shear_about(&u, s.negated(), false, 16).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn linear() {
        let u = random(32, 4);
        let v = random(32, 5);
        let s = ShearIndex::new(1, 1).unwrap();
        let (alpha, beta) = (1.7, -0.3);
        let comb = ComplexGrid::from_fn(32, 32, |i, j| u.get(i, j) * alpha + v.get(i, j) * beta);
        let lhs = digital_shear(&comb, s, false).unwrap();
        let su = digital_shear(&u, s, false).unwrap();
        let sv = digital_shear(&v, s, false).unwrap();
        let rhs = ComplexGrid::from_fn(32, 32, |i, j| su.get(i, j) * alpha + sv.get(i, j) * beta);
        assert!(lhs.max_abs_diff(&rhs) < 1e-10);
    }

    #[test]
    fn rejects_non_square() {
        assert!(digital_shear(&ComplexGrid::zeros(8, 4), ShearIndex::ZERO, false).is_err());
        assert!(digital_shear(&ComplexGrid::zeros(6, 6), ShearIndex::ZERO, false).is_err());
    }
}
