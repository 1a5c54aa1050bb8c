//! Measurement, per-shear reconstruction, recombination and scheme comparison.

mod compare;
mod measure;
mod operator;
mod reconstruct;
mod report;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use compare::{compare, psnr_against, run_scheme, ComparisonRow, ComparisonTable, FilterCache};
pub use measure::{forward_measure, symmetric_support, MeasurementSet};
pub use operator::SynthesisOperator;
pub use reconstruct::{
    combine, reconstruct_directional, reconstruct_wavelet, solve_shears, PipelineOptions,
    ShearSolution,
};
pub use report::{ReconstructionConfig, ReconstructionReport, ShearSolve};

use crate::error::{Error, Result};
use crate::sampling::{baseline_radial_mask, draw_mask_for_ratio, SamplingMask};

/// Sampling and reconstruction scheme.
///
/// `shearNN` is the directional scheme with `NN = 2^(J/2 + 2)` (so `shear08`
/// is `J = 2`, `shear16` is `J = 4`). `wave01` pairs the wavelet baseline with
/// the radial variable-density mask, `wave02` with the directional mask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Scheme {
    Directional { finest_scale: u32 },
    Wave01,
    Wave02 { finest_scale: u32 },
}

impl Scheme {
    pub fn directional(finest_scale: u32) -> Result<Self> {
        if finest_scale == 0 || finest_scale % 2 == 1 {
            return Err(Error::InvalidParameter(format!(
                "finest scale must be a positive even integer, got {finest_scale}"
            )));
        }
        Ok(Scheme::Directional { finest_scale })
    }

    pub fn id(&self) -> String {
        match self {
            Scheme::Directional { finest_scale } => format!("shear{:02}", 1u64 << (finest_scale / 2 + 2)),
            Scheme::Wave01 => "wave01".into(),
            Scheme::Wave02 { .. } => "wave02".into(),
        }
    }

    pub fn finest_scale(&self) -> Option<u32> {
        match self {
            Scheme::Directional { finest_scale } | Scheme::Wave02 { finest_scale } => Some(*finest_scale),
            Scheme::Wave01 => None,
        }
    }

    pub fn draw_mask(&self, n: usize, ratio: f64, seed: u64) -> Result<SamplingMask> {
        match self {
            Scheme::Directional { finest_scale } | Scheme::Wave02 { finest_scale } => {
                draw_mask_for_ratio(*finest_scale, n, ratio, seed)
            }
            Scheme::Wave01 => baseline_radial_mask(n, ratio, seed),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wave01" => return Ok(Scheme::Wave01),
            "wave02" => return Ok(Scheme::Wave02 { finest_scale: 2 }),
            _ => {}
        }
        let bad = || {
            Error::InvalidParameter(format!(
                "unknown scheme {s:?}; valid ids: shear08, shear16, shear32, ... (directional, finest scale 2, 4, 6, ...), wave01, wave02"
            ))
        };
        let count: u64 = s.strip_prefix("shear").ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if count < 8 || !count.is_power_of_two() {
            return Err(bad());
        }
        Scheme::directional(2 * (count.trailing_zeros() - 2))
    }
}

impl TryFrom<String> for Scheme {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Scheme> for String {
    fn from(s: Scheme) -> String {
        s.id()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scheme_ids() {
        assert_eq!(Scheme::directional(2).unwrap().id(), "shear08");
        assert_eq!(Scheme::directional(4).unwrap().id(), "shear16");
        for id in ["shear08", "shear16", "shear32", "wave01", "wave02"] {
            assert_eq!(id.parse::<Scheme>().unwrap().id(), id);
        }
        for bad in ["shear", "shear12", "shear04", "wave03", ""] {
            assert!(bad.parse::<Scheme>().is_err(), "{bad}");
        }
        assert!(Scheme::directional(3).is_err());
    }
}
