use super::grid::{same_shape, RealGrid};
use crate::error::{Error, Result};

pub fn mse(u: &RealGrid, v: &RealGrid) -> Result<f64> {
    same_shape(u.shape(), v.shape())?;
    let n = u.data().len() as f64;
    Ok(u.data()
        .iter()
        .zip(v.data())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / n)
}

/// Peak signal-to-noise ratio in decibels, `10·log10(peak²/MSE)`.
/// Identical grids give `f64::INFINITY`.
pub fn psnr(u: &RealGrid, v: &RealGrid, peak: f64) -> Result<f64> {
    if !(peak > 0.0 && peak.is_finite()) {
        return Err(Error::InvalidParameter(format!("psnr peak must be positive, got {peak}")));
    }
    let m = mse(u, v)?;
    if m == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (peak * peak / m).log10())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psnr_reference_values() {
        let u = RealGrid::from_fn(8, 8, |i, j| ((i + j) % 3) as f64 / 3.0);
        assert_eq!(psnr(&u, &u, 1.0).unwrap(), f64::INFINITY);

        let v = RealGrid::from_fn(8, 8, |i, j| u.get(i, j) + 1.0 / 255.0);
        assert!((psnr(&u, &v, 1.0).unwrap() - 20.0 * 255f64.log10()).abs() < 1e-9);
        assert!((psnr(&u, &v, 1.0).unwrap() - 48.1308).abs() < 1e-4);

        let a = RealGrid::zeros(2, 2);
        let b = RealGrid::from_fn(2, 2, |_, _| 0.5);
        assert!((psnr(&a, &b, 1.0).unwrap() - 6.0206).abs() < 1e-4);
    }

    #[test]
    fn psnr_errors() {
        let a = RealGrid::zeros(2, 2);
        assert!(psnr(&a, &a, 0.0).is_err());
        assert!(psnr(&a, &RealGrid::zeros(2, 3), 1.0).is_err());
    }
}
