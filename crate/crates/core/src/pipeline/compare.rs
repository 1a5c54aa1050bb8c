//! Scheme comparison tables.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::measure::forward_measure;
use super::reconstruct::{reconstruct_directional, reconstruct_wavelet, PipelineOptions};
use super::report::ReconstructionReport;
use super::Scheme;
use crate::error::{Error, Result};
use crate::filter_bank::{build_directional_filters, DirectionalFilterSet};
use crate::spectral::{psnr, RealGrid};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub scheme: String,
    pub ratio: f64,
    pub seed: u64,
    #[serde(with = "super::report::psnr_format")]
    pub psnr_db: Option<f64>,
    pub seconds: f64,
    pub converged_shears: usize,
    pub total_shears: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
}

fn fmt_psnr(v: Option<f64>) -> String {
    match v {
        Some(x) if x.is_infinite() => "inf".into(),
        Some(x) => format!("{x:.4}"),
        None => String::new(),
    }
}

impl ComparisonTable {
    /// CSV with columns `scheme, ratio, seed, psnr_db, seconds, converged_shears`.
    /// Without timing the seconds column holds `NA`, which makes the output
    /// reproducible byte for byte.
    pub fn to_csv(&self, timing: bool) -> String {
        let mut out = String::from("scheme,ratio,seed,psnr_db,seconds,converged_shears\n");
        for r in &self.rows {
            let secs = if timing { format!("{:.3}", r.seconds) } else { "NA".into() };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.scheme,
                r.ratio,
                r.seed,
                fmt_psnr(r.psnr_db),
                secs,
                r.converged_shears
            );
        }
        out
    }

    /// Rows of `scheme`, in insertion order.
    pub fn rows_for(&self, scheme: &str) -> impl Iterator<Item = &ComparisonRow> {
        let scheme = scheme.to_string();
        self.rows.iter().filter(move |r| r.scheme == scheme)
    }
}

/// PSNR against `truth` with the ground-truth peak as reference level.
pub fn psnr_against(truth: &RealGrid, estimate: &RealGrid) -> Result<f64> {
    let peak = truth.max_abs();
    psnr(truth, estimate, if peak > 0.0 { peak } else { 1.0 })
}

/// Caches directional filter banks per finest scale.
#[derive(Default)]
pub struct FilterCache {
    banks: BTreeMap<(usize, u32), DirectionalFilterSet>,
}

impl FilterCache {
    pub fn get(&mut self, n: usize, finest_scale: u32) -> Result<&DirectionalFilterSet> {
        match self.banks.entry((n, finest_scale)) {
            Entry::Occupied(e) => Ok(e.into_mut()),
            Entry::Vacant(e) => Ok(e.insert(build_directional_filters(n, finest_scale)?)),
        }
    }
}

/// Draws the scheme's mask for `ratio`, measures `u` and reconstructs.
pub fn run_scheme(
    u: &RealGrid,
    scheme: Scheme,
    ratio: f64,
    seed: u64,
    opts: &PipelineOptions,
    cache: &mut FilterCache,
) -> Result<(RealGrid, ReconstructionReport)> {
    let mask = scheme.draw_mask(u.rows(), ratio, seed)?;
    let meas = forward_measure(u, &mask)?;
    let (img, mut report) = match scheme {
        Scheme::Directional { finest_scale } => {
            reconstruct_directional(&meas, cache.get(u.rows(), finest_scale)?, opts)?
        }
        _ => reconstruct_wavelet(&meas, scheme, opts)?,
    };
    report.psnr_db = Some(psnr_against(u, &img)?);
    Ok((img, report))
}

/// PSNR and runtime for every `(scheme, ratio, seed)`.
pub fn compare(
    u: &RealGrid,
    schemes: &[Scheme],
    ratios: &[f64],
    seeds: &[u64],
    opts: &PipelineOptions,
) -> Result<ComparisonTable> {
    if schemes.is_empty() || ratios.is_empty() || seeds.is_empty() {
        return Err(Error::InvalidParameter(
            "compare needs at least one scheme, ratio and seed".into(),
        ));
    }
    let mut cache = FilterCache::default();
    let mut rows = Vec::new();
    for &scheme in schemes {
        for &ratio in ratios {
            for &seed in seeds {
                let (_, report) = run_scheme(u, scheme, ratio, seed, opts, &mut cache)?;
                log::info!(
                    "{} ratio {ratio} seed {seed}: {} dB",
                    scheme.id(),
                    fmt_psnr(report.psnr_db)
                );
                rows.push(ComparisonRow {
                    scheme: scheme.id(),
                    ratio,
                    seed,
                    psnr_db: report.psnr_db,
                    seconds: report.seconds,
                    converged_shears: report.converged_shears,
                    total_shears: report.shears.len(),
                });
            }
        }
    }
    Ok(ComparisonTable { rows })
}
