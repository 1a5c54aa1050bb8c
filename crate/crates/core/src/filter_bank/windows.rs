//! Meyer-type frequency windows forming an exact partition of unity.

use crate::error::{Error, Result};
use crate::spectral::{centered, RealGrid};

/// Polynomial smooth step: 0 for `t <= 0`, 1 for `t >= 1`, with `ν(t) + ν(1-t) = 1`.
pub(crate) fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        t.powi(4) * (35.0 - 84.0 * t + 70.0 * t * t - 20.0 * t.powi(3))
    }
}

/// 1-D Meyer low-pass profile: 1 on `[0, 1]`, 0 beyond 2, `cos(π/2·ν(t-1))` between.
pub(crate) fn meyer_lowpass(t: f64) -> f64 {
    let t = t.abs();
    if t <= 1.0 {
        1.0
    } else if t >= 2.0 {
        0.0
    } else {
        (std::f64::consts::FRAC_PI_2 * smooth_step(t - 1.0)).cos()
    }
}

/// Scaling window `Φ̂` and band windows `Ψ̂_j`, `j = 0..=J`, sampled on the
/// `N×N` DFT grid (storage layout, DC at `(0, 0)`).
///
/// With `R_j = N·2^(j-J-2)` and `L_j(ξ) = b(|ξ1|/R_j)·b(|ξ2|/R_j)` the windows are
/// `Φ̂ = L_0`, `Ψ̂_j = sqrt(L_{j+1}² - L_j²)` for `j < J` and `Ψ̂_J = sqrt(1 - L_J²)`,
/// so `Ψ̂_j` lives on the square annulus `R_j ≤ max|ξ| ≤ 4·R_j` and the squared
/// windows telescope to one.
#[derive(Clone, Debug)]
pub struct ScaleWindows {
    n: usize,
    finest_scale: u32,
    lowpass: RealGrid,
    bands: Vec<RealGrid>,
}

pub fn min_grid_size(finest_scale: u32) -> usize {
    1usize << (finest_scale + 2)
}

pub fn build_scale_windows(n: usize, finest_scale: u32) -> Result<ScaleWindows> {
    if !n.is_power_of_two() {
        return Err(Error::InvalidDimensions(format!("grid size {n} is not a power of two")));
    }
    if finest_scale > 40 || n < min_grid_size(finest_scale) {
        return Err(Error::GridTooSmall {
            n,
            j: finest_scale,
            min: min_grid_size(finest_scale.min(40)),
        });
    }
    let big_j = finest_scale as i32;
    let cutoff = |j: u32| n as f64 * 2f64.powi(j as i32 - big_j - 2);
    let lows: Vec<RealGrid> = (0..=finest_scale)
        .map(|j| {
            let r = cutoff(j);
            RealGrid::from_fn(n, n, |a, b| {
                let (f1, f2) = (centered(a, n) as f64, centered(b, n) as f64);
                meyer_lowpass(f1 / r) * meyer_lowpass(f2 / r)
            })
        })
        .collect();

    let band = |outer: Option<&RealGrid>, inner: &RealGrid| {
        RealGrid::from_fn(n, n, |a, b| {
            let hi = outer.map_or(1.0, |g| g.get(a, b).powi(2));
            (hi - inner.get(a, b).powi(2)).max(0.0).sqrt()
        })
    };
    let mut bands = Vec::with_capacity(lows.len());
    for j in 0..lows.len() {
        bands.push(band(lows.get(j + 1), &lows[j]));
    }
    Ok(ScaleWindows {
        n,
        finest_scale,
        lowpass: lows.into_iter().next().unwrap(),
        bands,
    })
}

impl ScaleWindows {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn finest_scale(&self) -> u32 {
        self.finest_scale
    }

    pub fn lowpass(&self) -> &RealGrid {
        &self.lowpass
    }

    /// `Ψ̂_j` for `j = 0..=J`.
    pub fn bands(&self) -> &[RealGrid] {
        &self.bands
    }

    /// `|Φ̂|² + Σ_j |Ψ̂_j|²` at storage index `(a, b)`.
    pub fn energy_at(&self, a: usize, b: usize) -> f64 {
        self.lowpass.get(a, b).powi(2) + self.bands.iter().map(|g| g.get(a, b).powi(2)).sum::<f64>()
    }
}
