//! Growth of the union mask size against `J · 2^(J/2 (1+6ρ))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative increase of the ratio between consecutive scales still counted
/// as nonincreasing.
pub const SCALING_TOLERANCE: f64 = 0.2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub finest_scale: u32,
    pub count: usize,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub rho: f64,
    pub rows: Vec<ScalingRow>,
    /// `max ratio / min ratio`.
    pub spread: f64,
    pub nonincreasing: bool,
}

impl ScalingReport {
    pub fn within_band(&self, factor: f64) -> bool {
        self.spread <= factor
    }
}

pub fn cardinality_bound(finest_scale: u32, rho: f64) -> f64 {
    let j = finest_scale as f64;
    j * 2f64.powf(j / 2.0 * (1.0 + 6.0 * rho))
}

pub fn cardinality_scaling_check(scales: &[u32], counts: &[usize], rho: f64) -> Result<ScalingReport> {
    if scales.len() < 2 {
        return Err(Error::InvalidParameter("scaling check needs at least two scales".into()));
    }
    if scales.len() != counts.len() {
        return Err(Error::InvalidParameter(format!(
            "{} scales but {} counts",
            scales.len(),
            counts.len()
        )));
    }
    if scales.contains(&0) {
        return Err(Error::InvalidParameter("scales must be positive".into()));
    }
    let rows: Vec<ScalingRow> = scales
        .iter()
        .zip(counts)
        .map(|(&j, &count)| {
            let bound = cardinality_bound(j, rho);
            ScalingRow {
                finest_scale: j,
                count,
                bound,
                ratio: count as f64 / bound,
            }
        })
        .collect();
    let (lo, hi) = rows
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r.ratio), hi.max(r.ratio)));
    let nonincreasing = rows
        .windows(2)
        .all(|w| w[1].ratio <= w[0].ratio * (1.0 + SCALING_TOLERANCE));
    Ok(ScalingReport {
        rho,
        rows,
        spread: if lo > 0.0 { hi / lo } else { f64::INFINITY },
        nonincreasing,
    })
}
