//! Reconstruction reports.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::measure::MeasurementSet;
use super::reconstruct::PipelineOptions;
use super::Scheme;
use crate::filter_bank::Cone;
use crate::l1::SolverReport;
use crate::sampling::MaskTarget;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShearSolve {
    pub q: i64,
    pub level: u32,
    pub cone: Option<Cone>,
    pub report: SolverReport,
}

/// Writes a non-finite PSNR as the string `"inf"`.
pub(crate) mod psnr_format {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) if x.is_infinite() => s.serialize_str("inf"),
            Some(x) => s.serialize_f64(*x),
            None => s.serialize_none(),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        match Option::<Raw>::deserialize(d)? {
            None => Ok(None),
            Some(Raw::Num(x)) => Ok(Some(x)),
            Some(Raw::Text(t)) if t == "inf" => Ok(Some(f64::INFINITY)),
            Some(Raw::Text(t)) => Err(serde::de::Error::custom(format!("bad psnr value {t:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionConfig {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "J")]
    pub finest_scale: Option<u32>,
    pub ratio_or_per_shear_m: MaskTarget,
    pub seed: u64,
    pub options: PipelineOptions,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionReport {
    pub version: String,
    pub scheme: String,
    pub config: ReconstructionConfig,
    pub kept_fraction: f64,
    pub shears: Vec<ShearSolve>,
    pub converged_shears: usize,
    pub dropped_shears: usize,
    pub imaginary_residue: f64,
    #[serde(with = "psnr_format", default, skip_serializing_if = "Option::is_none")]
    pub psnr_db: Option<f64>,
    pub seconds: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ReconstructionReport {
    pub(crate) fn new(
        scheme: Scheme,
        meas: &MeasurementSet,
        opts: &PipelineOptions,
        shears: Vec<ShearSolve>,
        imaginary_residue: f64,
        seconds: f64,
    ) -> Self {
        let converged = shears.iter().filter(|s| s.report.converged).count();
        let mask = meas.mask();
        Self {
            version: crate::VERSION.to_string(),
            scheme: scheme.id(),
            config: ReconstructionConfig {
                n: meas.size(),
                finest_scale: scheme.finest_scale().or(mask.finest_scale()),
                ratio_or_per_shear_m: mask.target(),
                seed: mask.seed(),
                options: *opts,
            },
            kept_fraction: mask.kept_fraction(),
            dropped_shears: shears.len() - converged,
            converged_shears: converged,
            shears,
            imaginary_residue,
            psnr_db: None,
            seconds,
            notes: if mask.cardinality() == 0 {
                vec!["empty mask: the minimizer is the zero image".into()]
            } else {
                Vec::new()
            },
        }
    }

    pub fn all_converged(&self) -> bool {
        self.dropped_shears == 0
    }

    pub fn to_json(&self) -> crate::Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
