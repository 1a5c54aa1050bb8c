mod commands;
mod failure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use shearsense::phantoms::PhantomKind;

use failure::Failure;

#[derive(Parser, Debug)]
#[command(name = "shearsense", version, about = "Directional Fourier subsampling and reconstruction")]
struct Cli {
    /// Caps the number of shear subproblems solved concurrently.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
enum Command {
    /// Render a phantom to CIFG + PGM.
    Phantom(PhantomArgs),
    /// Draw a sampling mask.
    Mask(MaskArgs),
    /// Sample an image's spectrum on a mask.
    Measure(MeasureArgs),
    /// Reconstruct an image from Fourier samples.
    Reconstruct(ReconstructArgs),
    /// PSNR/runtime table over schemes, ratios and seeds.
    Compare(CompareArgs),
    /// Restricted isometry constant of a weighted shear-subsystem matrix.
    Riptest(RipArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ImageSource {
    /// Ground-truth image (CIFG, real).
    #[arg(long, conflicts_with_all = ["spec", "preset"])]
    pub image: Option<PathBuf>,
    /// Phantom spec (JSON) rendered on the fly.
    #[arg(long, conflicts_with = "preset")]
    pub spec: Option<PathBuf>,
    /// Phantom preset rendered at --grid-size.
    #[arg(long, value_enum)]
    pub preset: Option<PresetArg>,
    #[arg(long, default_value_t = 256)]
    pub grid_size: usize,
}

#[derive(clap::ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PresetArg {
    Disk,
    Ellipse,
    TwoRegionSmooth,
}

impl From<PresetArg> for PhantomKind {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::Disk => PhantomKind::Disk,
            PresetArg::Ellipse => PhantomKind::Ellipse,
            PresetArg::TwoRegionSmooth => PhantomKind::TwoRegionSmooth,
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct PhantomArgs {
    #[command(flatten)]
    pub source: ImageSource,
    /// Output prefix; writes <out>.cifg, <out>.pgm and <out>.run.json.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct MaskArgs {
    #[arg(long, default_value_t = 256)]
    pub grid_size: usize,
    /// Finest scale J (even). Defaults to the one implied by --scheme, else 2.
    #[arg(long)]
    pub finest_scale: Option<u32>,
    /// `directional`, `radial`, or a scheme id (shear08, shear16, wave01, wave02).
    #[arg(long, default_value = "directional")]
    pub scheme: String,
    /// Target fraction of the N*N grid.
    #[arg(long, conflicts_with_all = ["per_shear_m", "theory"])]
    pub ratio: Option<f64>,
    /// Draws per shear and cone.
    #[arg(long, conflicts_with = "theory")]
    pub per_shear_m: Option<usize>,
    /// Theoretical counts on the grid 2^ceil(J(1+rho)); ignores --grid-size.
    #[arg(long)]
    pub theory: bool,
    #[arg(long, default_value_t = shearsense::sampling::DEFAULT_RHO)]
    pub rho: f64,
    #[arg(long, env = "CIFG_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Output prefix; writes <out>.json, <out>.pgm and <out>.run.json.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub source: ImageSource,
    #[arg(long)]
    pub mask: PathBuf,
    /// Output directory (created if its parent exists).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone, Copy, Serialize)]
pub struct SolverArgs {
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Relative stopping tolerance of the l1 solver.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Depth of the anisotropic wavelet in the shear subproblems.
    #[arg(long)]
    pub directional_depth: Option<u32>,
    /// Depth of the isotropic wavelet baseline.
    #[arg(long)]
    pub baseline_depth: Option<u32>,
}

#[derive(Args, Debug, Serialize)]
pub struct ReconstructArgs {
    /// Measurement directory written by `measure`.
    #[arg(long, conflicts_with = "mask")]
    pub measurements: Option<PathBuf>,
    /// Mask to measure the ground truth with.
    #[arg(long)]
    pub mask: Option<PathBuf>,
    /// Ground truth; required with --mask, optional with --measurements.
    #[command(flatten)]
    pub truth: ImageSource,
    /// Scheme id; defaults to the one matching the mask.
    #[arg(long)]
    pub scheme: Option<String>,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Fail (exit 1) if any shear subproblem does not converge.
    #[arg(long)]
    pub strict: bool,
    /// Output prefix; writes <out>.cifg, <out>.pgm and <out>.json.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct CompareArgs {
    #[command(flatten)]
    pub source: ImageSource,
    /// Scheme ids (comma separated or repeated).
    #[arg(long, value_delimiter = ',', default_value = "shear08,wave01")]
    pub scheme: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "0.1")]
    pub ratio: Vec<f64>,
    #[arg(long, value_delimiter = ',', env = "CIFG_SEED", default_value = "0")]
    pub seed: Vec<u64>,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Write `NA` for runtimes so reruns give identical CSV.
    #[arg(long)]
    pub no_timing: bool,
    #[arg(long)]
    pub strict: bool,
    /// Output prefix; writes <out>.csv and <out>.json.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct RipArgs {
    #[arg(long, default_value_t = 16)]
    pub grid_size: usize,
    #[arg(long, default_value_t = 2)]
    pub finest_scale: u32,
    /// Shear as `q/level`, i.e. q * 2^-level.
    #[arg(long, default_value = "0/0")]
    pub shear: String,
    /// Number of i.i.d. draws from the shear's density.
    #[arg(long, default_value_t = 64)]
    pub m: usize,
    /// Number of wavelet atoms (matrix columns), picked at random.
    #[arg(long, default_value_t = 16)]
    pub columns: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Random supports to test instead of an exhaustive scan.
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, env = "CIFG_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Output JSON path.
    #[arg(long)]
    pub out: PathBuf,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Failure::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let run_config = commands::RunConfig::new(&cli.command, cli.threads);
    match &cli.command {
        Command::Phantom(a) => commands::phantom(a, &run_config),
        Command::Mask(a) => commands::mask(a, &run_config),
        Command::Measure(a) => commands::measure(a, &run_config),
        Command::Reconstruct(a) => commands::reconstruct(a, &run_config),
        Command::Compare(a) => commands::compare(a, &run_config),
        Command::Riptest(a) => commands::riptest(a, &run_config),
    }
}
