//! Per-shear basis pursuit with dual-filter recombination, and the wavelet baseline.

use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::measure::{symmetric_samples, symmetric_support, MeasurementSet};
use super::operator::SynthesisOperator;
use super::report::{ReconstructionReport, ShearSolve};
use crate::error::{Error, Result};
use crate::filter_bank::{Cone, DirectionalFilterSet, ShearIndex, Wavelet2d, WaveletPair};
use crate::l1::{basis_pursuit, SolverOptions, SolverReport};
use crate::spectral::{Fft2Plan, RealGrid};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineOptions {
    pub solver: SolverOptions,
    /// Depth of the anisotropic wavelet in each shear subproblem; `None`
    /// picks `log2(N) - 2`.
    pub directional_depth: Option<u32>,
    /// Depth of the isotropic wavelet baseline; `None` picks `log2(N) - 3`.
    pub baseline_depth: Option<u32>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            solver: SolverOptions {
                max_iterations: 1000,
                residual_tolerance: None,
                relative_tolerance: 1e-4,
                step: None,
                step_fraction: 0.003,
                relaxation: 1.0,
            },
            directional_depth: None,
            baseline_depth: None,
        }
    }
}

fn default_depth(n: usize, offset: u32) -> u32 {
    n.trailing_zeros().saturating_sub(offset).max(1)
}

impl PipelineOptions {
    pub fn directional_depth_for(&self, n: usize) -> u32 {
        self.directional_depth.unwrap_or_else(|| default_depth(n, 2))
    }

    pub fn baseline_depth_for(&self, n: usize) -> u32 {
        self.baseline_depth.unwrap_or_else(|| default_depth(n, 3))
    }
}

/// A solved shear subproblem: its coefficients and solver report.
#[derive(Clone, Debug)]
pub struct ShearSolution {
    pub shear: ShearIndex,
    pub cone: Cone,
    pub coefficients: Vec<Complex64>,
    pub report: SolverReport,
}

fn shear_operator(
    meas_n: usize,
    support: &[usize],
    shear: ShearIndex,
    cone: Cone,
    depth: u32,
) -> Result<SynthesisOperator> {
    let wavelet = Wavelet2d::anisotropic(WaveletPair::daubechies8(), meas_n, depth)?;
    SynthesisOperator::new(meas_n, support.to_vec(), shear, cone == Cone::Vertical, wavelet)
}

/// Solves every shear subproblem `F(G_s) ⊙ y = P F(R S W* c_s)`.
pub fn solve_shears(
    meas: &MeasurementSet,
    filters: &DirectionalFilterSet,
    opts: &PipelineOptions,
) -> Result<Vec<ShearSolution>> {
    let n = meas.size();
    if filters.size() != n {
        return Err(Error::ShapeMismatch {
            left: (filters.size(), filters.size()),
            right: (n, n),
        });
    }
    let support = symmetric_support(meas.mask());
    let y = symmetric_samples(meas, &support);
    let depth = opts.directional_depth_for(n);
    let scale = 1.0 / n as f64;
    filters
        .filters()
        .par_iter()
        .map(|f| {
            let op = shear_operator(n, &support, f.shear, f.cone, depth)?;
            let spec = f.spectrum.data();
            let rhs: Vec<Complex64> = support.iter().zip(&y).map(|(&k, &v)| spec[k] * v * scale).collect();
            let (coefficients, report) = basis_pursuit(&op, &rhs, &opts.solver)?;
            Ok(ShearSolution {
                shear: f.shear,
                cone: f.cone,
                coefficients,
                report,
            })
        })
        .collect()
}

/// `Σ_s G̃_s ⋆ R S W* c_s` over the given solutions, summed in filter order.
/// Returns the image and the relative size of the discarded imaginary part.
pub fn combine(
    filters: &DirectionalFilterSet,
    solutions: &[&ShearSolution],
    depth: u32,
) -> Result<(RealGrid, f64)> {
    let n = filters.size();
    let plan = Fft2Plan::new(n, n);
    let mut acc = vec![Complex64::new(0.0, 0.0); n * n];
    for f in filters.filters() {
        let Some(sol) = solutions.iter().find(|s| s.shear == f.shear && s.cone == f.cone) else {
            continue;
        };
        if sol.coefficients.len() != n * n {
            return Err(Error::InvalidDimensions(format!(
                "{} coefficients for a {n}x{n} grid",
                sol.coefficients.len()
            )));
        }
        let op = shear_operator(n, &[], f.shear, f.cone, depth)?;
        let mut img = op.synthesize(&sol.coefficients);
        plan.forward(&mut img);
        for ((a, v), d) in acc.iter_mut().zip(&img).zip(f.dual.data()) {
            *a += v * d;
        }
    }
    plan.inverse(&mut acc);
    let re: f64 = acc.iter().map(|v| v.re * v.re).sum::<f64>().sqrt();
    let im: f64 = acc.iter().map(|v| v.im * v.im).sum::<f64>().sqrt();
    let residue = if re > 0.0 { im / re } else { im };
    Ok((RealGrid::from_fn(n, n, |i, j| acc[i * n + j].re), residue))
}

/// Directional reconstruction: one basis pursuit per shear and cone, then
/// recombination through the dual filters. Shears whose solver did not
/// converge are left out of the sum and flagged in the report.
pub fn reconstruct_directional(
    meas: &MeasurementSet,
    filters: &DirectionalFilterSet,
    opts: &PipelineOptions,
) -> Result<(RealGrid, ReconstructionReport)> {
    let start = Instant::now();
    let solutions = solve_shears(meas, filters, opts)?;
    let kept: Vec<&ShearSolution> = solutions.iter().filter(|s| s.report.converged).collect();
    if kept.len() < solutions.len() {
        log::warn!(
            "{} of {} shear subproblems did not converge and are left out",
            solutions.len() - kept.len(),
            solutions.len()
        );
    }
    let depth = opts.directional_depth_for(meas.size());
    let (image, residue) = combine(filters, &kept, depth)?;
    log::info!("imaginary residue of the recombined image: {residue:.3e}");
    let shears = solutions
        .iter()
        .map(|s| ShearSolve {
            q: s.shear.q(),
            level: s.shear.level(),
            cone: Some(s.cone),
            report: s.report,
        })
        .collect();
    let report = ReconstructionReport::new(
        super::Scheme::Directional {
            finest_scale: filters.finest_scale(),
        },
        meas,
        opts,
        shears,
        residue,
        start.elapsed().as_secs_f64(),
    );
    Ok((image, report))
}

/// Baseline: a single basis pursuit over orthonormal isotropic wavelet coefficients.
pub fn reconstruct_wavelet(
    meas: &MeasurementSet,
    scheme: super::Scheme,
    opts: &PipelineOptions,
) -> Result<(RealGrid, ReconstructionReport)> {
    let start = Instant::now();
    let n = meas.size();
    let support = symmetric_support(meas.mask());
    let scale = 1.0 / n as f64;
    let y: Vec<Complex64> = symmetric_samples(meas, &support).into_iter().map(|v| v * scale).collect();
    let wavelet = Wavelet2d::isotropic(WaveletPair::daubechies8(), n, opts.baseline_depth_for(n))?;
    let op = SynthesisOperator::new(n, support, ShearIndex::ZERO, false, wavelet)?;
    let (c, solve) = basis_pursuit(&op, &y, &opts.solver)?;
    if !solve.converged {
        log::warn!("wavelet baseline did not converge after {} iterations", solve.iterations);
    }
    let img = op.synthesize(&c);
    let image = RealGrid::from_fn(n, n, |i, j| img[i * n + j].re);
    let shears = vec![ShearSolve {
        q: 0,
        level: 0,
        cone: None,
        report: solve,
    }];
    let report = ReconstructionReport::new(scheme, meas, opts, shears, 0.0, start.elapsed().as_secs_f64());
    Ok((image, report))
}
