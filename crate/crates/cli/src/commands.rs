use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use shearsense::filter_bank::{build_directional_filters, Cone, ShearIndex, Wavelet2d, WaveletPair};
use shearsense::l1::{rip_constant, rip_constant_sampled, weighted_matrix, LinearMap};
use shearsense::phantoms::{render, PhantomSpec};
use shearsense::pipeline::{
    compare as run_compare, forward_measure, psnr_against, reconstruct_directional, reconstruct_wavelet,
    MeasurementSet, PipelineOptions, Scheme, SynthesisOperator,
};
use shearsense::sampling::{
    baseline_radial_mask, draw_mask_with, draw_theory_mask, raw_draws, MaskConfig, MaskScheme, MaskTarget,
    SamplingDensity, SamplingMask, DISCRETE_EXPONENT,
};
use shearsense::spectral::{centered, io, ComplexGrid, RealGrid};

use crate::failure::Failure;
use crate::{
    Command, CompareArgs, ImageSource, MaskArgs, MeasureArgs, PhantomArgs, ReconstructArgs, RipArgs, SolverArgs,
};

/// The validated command line, echoed into every artifact.
#[derive(Serialize)]
pub struct RunConfig {
    version: &'static str,
    threads: Option<usize>,
    #[serde(flatten)]
    command: Value,
}

impl RunConfig {
    pub fn new(command: &Command, threads: Option<usize>) -> Self {
        Self {
            version: shearsense::VERSION,
            threads,
            command: serde_json::to_value(command).unwrap_or(Value::Null),
        }
    }
}

type Out = Result<(), Failure>;

fn suffixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s: OsString = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn check_parent(out: &Path) -> Out {
    match out.parent() {
        Some(p) if !p.as_os_str().is_empty() && !p.is_dir() => {
            Err(Failure::Usage(format!("output directory {} does not exist", p.display())))
        }
        _ => Ok(()),
    }
}

fn write(path: &Path, text: &str) -> Out {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn write_json(path: &Path, value: &impl Serialize) -> Out {
    write(path, &(serde_json::to_string_pretty(value)? + "\n"))
}

fn load_image(src: &ImageSource, size: Option<usize>) -> Result<Option<RealGrid>, Failure> {
    let n = size.unwrap_or(src.grid_size);
    if let Some(path) = &src.image {
        return Ok(Some(io::read(path)?.into_real()?));
    }
    if let Some(path) = &src.spec {
        return Ok(Some(render(&PhantomSpec::load(path)?)?));
    }
    Ok(match src.preset {
        Some(kind) => Some(render(&PhantomSpec::preset(kind.into(), n))?),
        None => None,
    })
}

fn require_image(src: &ImageSource) -> Result<RealGrid, Failure> {
    load_image(src, None)?.ok_or_else(|| Failure::Usage("one of --image, --spec or --preset is required".into()))
}

fn parse_scheme(id: &str) -> Result<Scheme, Failure> {
    Ok(Scheme::from_str(id)?)
}

fn pipeline_options(a: &SolverArgs) -> PipelineOptions {
    let mut opts = PipelineOptions::default();
    if let Some(m) = a.max_iterations {
        opts.solver.max_iterations = m;
    }
    if let Some(t) = a.tolerance {
        opts.solver.relative_tolerance = t;
    }
    opts.directional_depth = a.directional_depth.or(opts.directional_depth);
    opts.baseline_depth = a.baseline_depth.or(opts.baseline_depth);
    opts
}

pub fn phantom(a: &PhantomArgs, run: &RunConfig) -> Out {
    if a.source.image.is_some() {
        return Err(Failure::Usage("phantom takes --spec or --preset, not --image".into()));
    }
    check_parent(&a.out)?;
    let u = require_image(&a.source)?;
    io::write_real(&suffixed(&a.out, ".cifg"), &u)?;
    io::write_pgm(&suffixed(&a.out, ".pgm"), &u)?;
    write_json(&suffixed(&a.out, ".run.json"), run)?;
    println!("phantom {}x{} written to {}.cifg", u.rows(), u.cols(), a.out.display());
    Ok(())
}

fn mask_scheme(a: &MaskArgs) -> Result<(MaskScheme, u32), Failure> {
    let (kind, implied) = match a.scheme.as_str() {
        "directional" => (MaskScheme::Directional, None),
        "radial" => (MaskScheme::Radial, None),
        id => {
            let s = parse_scheme(id)?;
            match s {
                Scheme::Wave01 => (MaskScheme::Radial, None),
                _ => (MaskScheme::Directional, s.finest_scale()),
            }
        }
    };
    let j = match (a.finest_scale, implied) {
        (Some(j), Some(k)) if j != k => {
            return Err(Failure::Usage(format!(
                "--finest-scale {j} contradicts scheme {} (finest scale {k})",
                a.scheme
            )))
        }
        (Some(j), _) => j,
        (None, Some(k)) => k,
        (None, None) => 2,
    };
    Ok((kind, j))
}

pub fn mask(a: &MaskArgs, run: &RunConfig) -> Out {
    check_parent(&a.out)?;
    let (kind, j) = mask_scheme(a)?;
    let mask = match kind {
        MaskScheme::Radial => {
            let ratio = a.ratio.ok_or_else(|| Failure::Usage("the radial mask needs --ratio".into()))?;
            baseline_radial_mask(a.grid_size, ratio, a.seed)?
        }
        MaskScheme::Directional if a.theory => draw_theory_mask(j, a.rho, a.seed)?,
        MaskScheme::Directional => {
            let target = match (a.ratio, a.per_shear_m) {
                (Some(r), None) => MaskTarget::Ratio(r),
                (None, Some(m)) => MaskTarget::PerShearM(m),
                _ => return Err(Failure::Usage("one of --ratio, --per-shear-m or --theory is required".into())),
            };
            let mut cfg = MaskConfig::new(a.grid_size, j, a.seed, target);
            cfg.rho = a.rho;
            draw_mask_with(&cfg)?
        }
    };
    mask.save(&suffixed(&a.out, ".json"))?;
    write_json(&suffixed(&a.out, ".run.json"), run)?;
    println!(
        "{} points ({:.4} of the grid) in {} groups",
        mask.cardinality(),
        mask.kept_fraction(),
        mask.groups().len()
    );
    Ok(())
}

pub fn measure(a: &MeasureArgs, run: &RunConfig) -> Out {
    check_parent(&a.out)?;
    let mask = SamplingMask::load(&a.mask)?;
    let u = load_image(&a.source, Some(mask.size()))?
        .ok_or_else(|| Failure::Usage("one of --image, --spec or --preset is required".into()))?;
    let meas = forward_measure(&u, &mask)?;
    meas.save(&a.out)?;
    write_json(&a.out.join("run.json"), run)?;
    println!("{} samples written to {}", mask.cardinality(), a.out.display());
    Ok(())
}

fn default_scheme(mask: &SamplingMask) -> Result<Scheme, Failure> {
    match (mask.scheme(), mask.finest_scale()) {
        (MaskScheme::Directional, Some(j)) => Ok(Scheme::directional(j)?),
        (MaskScheme::Directional, None) => Err(Failure::Usage("directional mask without a finest scale".into())),
        (MaskScheme::Radial, _) => Ok(Scheme::Wave01),
    }
}

pub fn reconstruct(a: &ReconstructArgs, run: &RunConfig) -> Out {
    check_parent(&a.out)?;
    let (meas, truth) = match (&a.measurements, &a.mask) {
        (Some(dir), None) => {
            let meas = MeasurementSet::load(dir)?;
            let truth = load_image(&a.truth, Some(meas.size()))?;
            (meas, truth)
        }
        (None, Some(path)) => {
            let mask = SamplingMask::load(path)?;
            let truth = load_image(&a.truth, Some(mask.size()))?
                .ok_or_else(|| Failure::Usage("--mask needs a ground truth (--image, --spec or --preset)".into()))?;
            (forward_measure(&truth, &mask)?, Some(truth))
        }
        _ => return Err(Failure::Usage("one of --measurements or --mask is required".into())),
    };
    if let Some(t) = &truth {
        if t.shape() != (meas.size(), meas.size()) {
            return Err(Failure::Usage(format!(
                "image is {}x{} but the mask grid is {}",
                t.rows(),
                t.cols(),
                meas.size()
            )));
        }
    }
    let scheme = match &a.scheme {
        Some(id) => parse_scheme(id)?,
        None => default_scheme(meas.mask())?,
    };
    let opts = pipeline_options(&a.solver);
    let (img, mut report) = match scheme {
        Scheme::Directional { finest_scale } => {
            let filters = build_directional_filters(meas.size(), finest_scale)?;
            reconstruct_directional(&meas, &filters, &opts)?
        }
        _ => reconstruct_wavelet(&meas, scheme, &opts)?,
    };
    if let Some(t) = &truth {
        report.psnr_db = Some(psnr_against(t, &img)?);
    }
    io::write_real(&suffixed(&a.out, ".cifg"), &img)?;
    io::write_pgm(&suffixed(&a.out, ".pgm"), &img)?;
    let mut doc = serde_json::to_value(&report)?;
    doc["run"] = serde_json::to_value(run)?;
    write_json(&suffixed(&a.out, ".json"), &doc)?;
    match report.psnr_db {
        Some(p) => println!("{}: {p:.2} dB, {}/{} shears converged", report.scheme, report.converged_shears, report.shears.len()),
        None => println!("{}: {}/{} shears converged", report.scheme, report.converged_shears, report.shears.len()),
    }
    if a.strict && !report.all_converged() {
        return Err(Failure::Compute(format!("{} shear subproblems did not converge", report.dropped_shears)));
    }
    Ok(())
}

pub fn compare(a: &CompareArgs, run: &RunConfig) -> Out {
    check_parent(&a.out)?;
    let u = require_image(&a.source)?;
    let schemes = a.scheme.iter().map(|s| parse_scheme(s)).collect::<Result<Vec<_>, _>>()?;
    let table = run_compare(&u, &schemes, &a.ratio, &a.seed, &pipeline_options(&a.solver))?;
    let csv = table.to_csv(!a.no_timing);
    write(&suffixed(&a.out, ".csv"), &csv)?;
    let mut doc = serde_json::to_value(&table)?;
    doc["run"] = serde_json::to_value(run)?;
    write_json(&suffixed(&a.out, ".json"), &doc)?;
    print!("{csv}");
    let partial = table.rows.iter().filter(|r| r.converged_shears < r.total_shears).count();
    if a.strict && partial > 0 {
        return Err(Failure::Compute(format!("{partial} runs had unconverged shear subproblems")));
    }
    Ok(())
}

fn parse_shear(text: &str) -> Result<ShearIndex, Failure> {
    let bad = || Failure::Usage(format!("shear {text:?} is not of the form q/level"));
    let (q, level) = text.split_once('/').ok_or_else(bad)?;
    let q: i64 = q.trim().parse().map_err(|_| bad())?;
    let level: u32 = level.trim().parse().map_err(|_| bad())?;
    Ok(ShearIndex::new(q, level)?)
}

pub fn riptest(a: &RipArgs, run: &RunConfig) -> Out {
    check_parent(&a.out)?;
    let n = a.grid_size;
    if !n.is_power_of_two() || n < 4 {
        return Err(Failure::Usage(format!("grid size {n} must be a power of two of at least 4")));
    }
    let shear = parse_shear(&a.shear)?;
    if a.columns == 0 || a.columns > n * n {
        return Err(Failure::Usage(format!("--columns must lie in 1..={}", n * n)));
    }
    let density = SamplingDensity::discrete(n, a.finest_scale, shear, Cone::Horizontal, DISCRETE_EXPONENT)?;
    let points: Vec<[i64; 2]> = raw_draws(&density, a.m, a.seed)
        .into_iter()
        .map(|k| [centered(k / n, n), centered(k % n, n)])
        .collect();

    let depth = n.trailing_zeros().saturating_sub(2).max(1);
    let wavelet = Wavelet2d::anisotropic(WaveletPair::daubechies8(), n, depth)?;
    let op = SynthesisOperator::new(n, (0..n * n).collect(), shear, false, wavelet)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut atoms = sample(&mut rng, n * n, a.columns).into_vec();
    atoms.sort_unstable();
    let columns = atoms
        .iter()
        .map(|&l| {
            let mut e = vec![Complex64::new(0.0, 0.0); n * n];
            e[l] = Complex64::new(1.0, 0.0);
            ComplexGrid::new(n, n, op.apply(&e))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let prob = |a: i64, b: i64| density.prob(a, b).unwrap_or(0.0);
    let matrix = weighted_matrix(&points, &prob, a.m, &columns)?;
    let est = match a.trials {
        Some(t) => rip_constant_sampled(&matrix, a.k, t, a.seed)?,
        None => rip_constant(&matrix, a.k)?,
    };
    let doc = json!({
        "version": shearsense::VERSION,
        "rows": points.len(),
        "columns": atoms,
        "estimate": est,
        "run": run,
    });
    write_json(&a.out, &doc)?;
    println!("delta_{} = {:.6} ({:?}, {} supports)", est.k, est.delta, est.kind, est.supports);
    Ok(())
}
