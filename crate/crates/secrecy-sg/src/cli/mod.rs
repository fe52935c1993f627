//! Command-line front end.
//!
//! Four subcommands: `analytic` evaluates a closed-form expression,
//! `simulate` runs the Monte Carlo estimator, `figure` reproduces a figure
//! preset as CSV files, and `validate` runs a named validation suite with
//! machine-readable PASS/FAIL lines.
//!
//! Data goes to stdout (or `--out`); diagnostics go to stderr. Exit codes:
//! 0 success, 1 validation failure or I/O error, 2 usage/config error.

mod figures;
mod validate;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analytic::{self, NetworkParams, SnrMode, Threshold};
use crate::montecarlo::{estimate_ccdf, EmpiricalCcdf, ScenarioSpec, SimOptions};
use crate::specfun::CellAreaLaw;
use crate::{Error, Result};

pub use figures::cmd_figure;
pub use validate::cmd_validate;

/// Errors a command can surface: configuration problems exit 2, I/O
/// failures exit 1.
#[derive(Debug)]
pub enum CliError {
    Config(Error),
    Io(io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Config(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "I/O failure: {e}"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "secrecy-sg",
    version,
    about = "Secrecy-rate statistics for Poisson cellular networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a closed-form CCDF or mean expression (pure, no RNG)
    Analytic(AnalyticArgs),
    /// Estimate the secrecy-rate CCDF and mean by Monte Carlo
    Simulate(SimulateArgs),
    /// Reproduce a figure preset (4-8) as a set of CSV files
    Figure(FigureArgs),
    /// Run a validation suite; exits 0 iff every check passes
    Validate(ValidateArgs),
}

/// Network parameters shared by every subcommand.
#[derive(Debug, Args, Clone)]
pub struct NetworkArgs {
    /// Base-station density (per unit area)
    #[arg(long, default_value_t = 1.0)]
    pub lambda_bs: f64,

    /// Eavesdropper density (per unit area)
    #[arg(long, default_value_t = 1.0)]
    pub lambda_e: f64,

    /// Path-loss exponent (must exceed 2)
    #[arg(long, default_value_t = 4.0)]
    pub alpha: f64,

    /// Received SNR from the serving BS at unit distance, in dB
    #[arg(long, conflicts_with = "high_snr")]
    pub snr_db: Option<f64>,

    /// Pure path-loss mode; the default when --snr-db is absent
    #[arg(long)]
    pub high_snr: bool,
}

impl NetworkArgs {
    pub fn params(&self) -> Result<NetworkParams> {
        let snr = match self.snr_db {
            Some(db) => SnrMode::from_db(db),
            None => SnrMode::High,
        };
        NetworkParams::new(self.lambda_bs, self.lambda_e, self.alpha, snr)
    }
}

/// Threshold grid flags.
#[derive(Debug, Args, Clone)]
pub struct GridArgs {
    /// Smallest rate threshold (bits per channel use)
    #[arg(long, default_value_t = 0.0)]
    pub r0_min: f64,

    /// Largest rate threshold
    #[arg(long, default_value_t = 6.0)]
    pub r0_max: f64,

    /// Threshold spacing
    #[arg(long, default_value_t = 0.5)]
    pub r0_step: f64,
}

impl GridArgs {
    pub fn build(&self) -> Result<Vec<f64>> {
        build_grid(self.r0_min, self.r0_max, self.r0_step)
    }
}

pub fn build_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(min >= 0.0) {
        return Err(Error::Argument(format!(
            "grid minimum must be >= 0, got {min}"
        )));
    }
    if !(step > 0.0) || !(max >= min) {
        return Err(Error::Argument(format!(
            "grid needs max >= min and step > 0, got min={min}, max={max}, step={step}"
        )));
    }
    let n = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| min + i as f64 * step).collect())
}

/// Monte Carlo controls shared by `simulate`, `figure` and `validate`.
#[derive(Debug, Args, Clone)]
pub struct SimArgs {
    /// Number of Monte Carlo trials
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,

    /// Master seed; the SECRECY_SG_SEED environment variable is the
    /// fallback when the flag is absent
    #[arg(long, env = "SECRECY_SG_SEED", default_value_t = 42)]
    pub seed: u64,

    /// Probability budget for the nearest relevant point escaping the
    /// simulation window
    #[arg(long, default_value_t = 1e-6)]
    pub window_eps: f64,

    /// BS-window enlargement factor under optimal association
    #[arg(long, default_value_t = 3.0)]
    pub window_factor: f64,

    /// Worker threads (default: available parallelism)
    #[arg(long)]
    pub workers: Option<usize>,
}

impl SimArgs {
    pub fn options(&self) -> SimOptions {
        SimOptions {
            window_epsilon: self.window_eps,
            window_factor: self.window_factor,
        }
    }
}

/// Which closed form `analytic` evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Formula {
    S1Ccdf,
    S1Mean,
    S2UpperCcdf,
    S2LowerCcdf,
    S2VoronoiCcdf,
    S2Coverage,
    S2UpperMean,
    S2LowerMean,
    S2VoronoiMean,
    S3CellCcdf,
    S3CellMean,
    S3RadiusCcdf,
    S3RadiusMean,
    RuPdf,
    DminSurvival,
    DminPdf,
}

#[derive(Debug, Args)]
pub struct AnalyticArgs {
    /// Expression to evaluate
    #[arg(long, value_enum)]
    pub formula: Formula,

    #[command(flatten)]
    pub network: NetworkArgs,

    #[command(flatten)]
    pub grid: GridArgs,

    /// Detection radius (s3-radius formulas only)
    #[arg(long)]
    pub d0: Option<f64>,

    /// Cell-area law shape parameter
    #[arg(long, default_value_t = 3.61)]
    pub cell_q: f64,

    /// Cell-area law rate parameter
    #[arg(long, default_value_t = 3.61)]
    pub cell_b: f64,

    /// Output CSV path (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Scenario selector for `simulate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    /// Full information, nearest BS serves
    S1,
    /// Full information, optimal BS serves
    S2,
    /// Intracell information only, nearest BS serves
    S3Cell,
    /// Detection radius d0, nearest BS serves
    S3Radius,
}

impl ScenarioArg {
    pub fn spec(&self, d0: Option<f64>) -> Result<ScenarioSpec> {
        Ok(match self {
            ScenarioArg::S1 => ScenarioSpec::FullInfoNearest,
            ScenarioArg::S2 => ScenarioSpec::FullInfoOptimal,
            ScenarioArg::S3Cell => ScenarioSpec::CellInfoNearest,
            ScenarioArg::S3Radius => {
                let d0 = d0.ok_or_else(|| {
                    Error::Argument("--d0 is required for scenario s3-radius".into())
                })?;
                ScenarioSpec::RadiusInfoNearest { d0 }
            }
        })
    }

    fn label(&self) -> &'static str {
        match self {
            ScenarioArg::S1 => "s1",
            ScenarioArg::S2 => "s2",
            ScenarioArg::S3Cell => "s3-cell",
            ScenarioArg::S3Radius => "s3-radius",
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Cell-association and information model
    #[arg(long, value_enum)]
    pub scenario: ScenarioArg,

    /// Detection radius (scenario s3-radius)
    #[arg(long, required_if_eq("scenario", "s3-radius"))]
    pub d0: Option<f64>,

    #[command(flatten)]
    pub network: NetworkArgs,

    #[command(flatten)]
    pub grid: GridArgs,

    #[command(flatten)]
    pub sim: SimArgs,

    /// Output CSV path (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Figure id
    #[arg(value_parser = clap::value_parser!(u8).range(4..=8))]
    pub id: u8,

    /// Base-station density
    #[arg(long, default_value_t = 1.0)]
    pub lambda_bs: f64,

    /// Path-loss exponents to render, one curve pair each
    #[arg(long, value_delimiter = ',', default_values_t = [2.5, 4.0])]
    pub alphas: Vec<f64>,

    /// Eavesdropper densities for the detection-radius sweep (figure 8)
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 1.0])]
    pub lambda_es: Vec<f64>,

    /// SNR of the simulated curves, in dB
    #[arg(long, default_value_t = 20.0)]
    pub snr_db: f64,

    #[command(flatten)]
    pub sim: SimArgs,

    /// Directory the CSV files are written into
    #[arg(long, default_value = "figures")]
    pub out: PathBuf,
}

/// Validation suite selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Scenario II empirical CCDF sits inside its analytic bracket
    Bounds,
    /// Cell-boundary distance follows its closed-form law
    Dmin,
    /// Hit-or-miss cell areas: mean, distribution and Laplace transform
    CellArea,
    /// Coupled per-realization orderings across scenarios and SNR modes
    Ordering,
    /// Bit-identical results across worker counts
    Determinism,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Suite to run
    #[arg(long, value_enum)]
    pub suite: Suite,

    #[command(flatten)]
    pub network: NetworkArgs,

    #[command(flatten)]
    pub sim: SimArgs,

    /// Detection radius used by the ordering suite
    #[arg(long, default_value_t = 1.0)]
    pub d0: f64,

    /// Voronoi cells sampled by the cell-area suite
    #[arg(long, default_value_t = 2_000)]
    pub cells: u64,
}

/// Dispatch a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Analytic(args) => with_sink(args.out.clone(), |w| cmd_analytic(&args, w)),
        Command::Simulate(args) => with_sink(args.out.clone(), |w| cmd_simulate(&args, w)),
        Command::Figure(args) => cmd_figure(&args).map(|paths| {
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
            true
        }),
        Command::Validate(args) => {
            let stdout = io::stdout();
            cmd_validate(&args, &mut stdout.lock())
        }
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(CliError::Config(e)) => {
            eprintln!("error: {e}");
            2
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: I/O failure: {e}");
            1
        }
    }
}

fn with_sink(
    path: Option<PathBuf>,
    f: impl FnOnce(&mut dyn Write) -> std::result::Result<(), CliError>,
) -> std::result::Result<bool, CliError> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            f(&mut w)?;
            w.flush()?;
        }
    }
    Ok(true)
}

/// Evaluate one closed form over the threshold grid (or as a single row for
/// means). Pure: no randomness is involved.
pub fn cmd_analytic(
    args: &AnalyticArgs,
    out: &mut dyn Write,
) -> std::result::Result<(), CliError> {
    let p = args.network.params()?;
    let law = CellAreaLaw::new(args.cell_q, args.cell_b)?;
    let grid = args.grid.build()?;
    let need_d0 = || {
        args.d0.ok_or_else(|| {
            Error::Argument("--d0 is required for s3-radius formulas".into())
        })
    };

    enum Rows {
        Mean(f64),
        Ccdf(Box<dyn Fn(&Threshold) -> Result<f64>>),
        Radial(Box<dyn Fn(f64) -> Result<f64>>),
    }

    let rows = match args.formula {
        Formula::S1Mean => Rows::Mean(analytic::mean_s1(&p)),
        Formula::S2UpperMean => Rows::Mean(analytic::mean_s2_upper(&p)),
        Formula::S2LowerMean => Rows::Mean(analytic::mean_s2_lower(&p)),
        Formula::S2VoronoiMean => Rows::Mean(analytic::mean_s2_upper_voronoi(&p, &law)),
        Formula::S3CellMean => Rows::Mean(analytic::mean_s3_cell_lower(&p)),
        Formula::S3RadiusMean => Rows::Mean(analytic::mean_s3_radius(&p, need_d0()?)?),
        Formula::S2Coverage => Rows::Mean(analytic::coverage_s2_exact_r0zero(&p, &law)),
        Formula::S1Ccdf => Rows::Ccdf(Box::new(move |t| Ok(analytic::ccdf_s1(&p, t)))),
        Formula::S2UpperCcdf => {
            Rows::Ccdf(Box::new(move |t| Ok(analytic::ccdf_s2_upper_pgfl(&p, t))))
        }
        Formula::S2LowerCcdf => {
            Rows::Ccdf(Box::new(move |t| Ok(analytic::ccdf_s2_lower(&p, t))))
        }
        Formula::S2VoronoiCcdf => Rows::Ccdf(Box::new(move |t| {
            Ok(analytic::ccdf_s2_upper_voronoi(&p, t, &law))
        })),
        Formula::S3CellCcdf => {
            Rows::Ccdf(Box::new(move |t| Ok(analytic::ccdf_s3_cell_lower(&p, t))))
        }
        Formula::S3RadiusCcdf => {
            let d0 = need_d0()?;
            Rows::Ccdf(Box::new(move |t| analytic::ccdf_s3_radius(&p, t, d0)))
        }
        Formula::RuPdf => Rows::Radial(Box::new(move |r| analytic::ru_pdf(&p, r))),
        Formula::DminSurvival => {
            Rows::Radial(Box::new(move |r| analytic::dmin_survival(&p, r)))
        }
        Formula::DminPdf => Rows::Radial(Box::new(move |r| analytic::dmin_pdf(&p, r))),
    };

    match rows {
        Rows::Mean(v) => {
            writeln!(out, "metric,value")?;
            writeln!(out, "mean,{v:.6}")?;
        }
        Rows::Ccdf(f) => {
            writeln!(out, "r0,value")?;
            for &r0 in &grid {
                let v = f(&Threshold::new(r0)?)?;
                writeln!(out, "{r0:.6},{v:.6}")?;
            }
        }
        Rows::Radial(f) => {
            // The threshold grid doubles as the radial grid for the
            // distance laws.
            writeln!(out, "r,value")?;
            for &r in &grid {
                writeln!(out, "{r:.6},{:.6}", f(r)?)?;
            }
        }
    }
    Ok(())
}

/// Run the Monte Carlo estimator and emit the survival grid plus trailer
/// metrics as CSV.
pub fn cmd_simulate(
    args: &SimulateArgs,
    out: &mut dyn Write,
) -> std::result::Result<(), CliError> {
    let p = args.network.params()?;
    let scenario = args.scenario.spec(args.d0)?;
    let grid = args.grid.build()?;
    let opts = args.sim.options();
    let ccdf = in_pool(args.sim.workers, || {
        estimate_ccdf(&p, &scenario, &grid, args.sim.trials, args.sim.seed, &opts)
    })??;
    out.write_all(render_simulate_csv(args, &ccdf).as_bytes())?;
    Ok(())
}

/// Serialize one simulation as CSV. Bytes depend only on the estimation
/// inputs, never on the worker count.
pub fn render_simulate_csv(args: &SimulateArgs, ccdf: &EmpiricalCcdf) -> String {
    let mut s = String::new();
    let snr = match args.network.snr_db {
        Some(db) => format!("{db}dB"),
        None => "high".into(),
    };
    let d0 = args
        .d0
        .map(|v| format!(" d0={v}"))
        .unwrap_or_default();
    s.push_str(&format!(
        "# secrecy-sg simulate scenario={}{} lambda_bs={} lambda_e={} alpha={} snr={} \
         grid={}:{}:{} trials={} seed={} window_eps={} window_factor={}\n",
        args.scenario.label(),
        d0,
        args.network.lambda_bs,
        args.network.lambda_e,
        args.network.alpha,
        snr,
        args.grid.r0_min,
        args.grid.r0_max,
        args.grid.r0_step,
        args.sim.trials,
        args.sim.seed,
        args.sim.window_eps,
        args.sim.window_factor,
    ));
    s.push_str("r0,survival,stderr\n");
    for i in 0..ccdf.thresholds.len() {
        s.push_str(&format!(
            "{:.6},{:.6},{:.6}\n",
            ccdf.thresholds[i], ccdf.survival[i], ccdf.stderr[i]
        ));
    }
    s.push_str(&format!("mean,{:.6}\n", ccdf.mean_rate));
    s.push_str(&format!("mean_stderr,{:.6}\n", ccdf.mean_stderr));
    s.push_str(&format!(
        "truncation_fraction,{:.6}\n",
        ccdf.truncation_fraction
    ));
    s.push_str(&format!("n_trials,{}\n", ccdf.n_trials));
    s.push_str(&format!("seed,{}\n", args.sim.seed));
    s
}

/// Run a closure inside a rayon pool of the requested size, or on the global
/// pool when no size was given.
pub fn in_pool<T: Send>(
    workers: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            if n == 0 {
                return Err(Error::Argument("worker count must be positive".into()));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Argument(format!("worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}
