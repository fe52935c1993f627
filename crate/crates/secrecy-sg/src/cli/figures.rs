//! Figure presets: canned parameter sweeps written as one CSV per curve.
//!
//! Analytic curves are evaluated exactly; simulated curves run at the
//! configured finite SNR (20 dB unless overridden) with unit BS density.
//! Every CSV starts with comment lines recording the preset's settings.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use super::{in_pool, CliError, FigureArgs};
use crate::analytic::{self, NetworkParams, SnrMode};
use crate::montecarlo::{estimate_ccdf, estimate_mean, ScenarioSpec};
use crate::specfun::CellAreaLaw;
use crate::Result;

/// Eavesdropper-density sweep shared by figures 4-7: 13 log-spaced points.
fn lambda_e_grid() -> Vec<f64> {
    (0..13)
        .map(|i| 10.0_f64.powf(-1.0 + 2.0 * i as f64 / 12.0))
        .collect()
}

/// Detection-radius sweep for figure 8.
fn d0_grid() -> Vec<f64> {
    (1..=20).map(|i| 0.25 * i as f64).collect()
}

struct CurveFile {
    path: PathBuf,
    content: String,
}

fn preset_header(args: &FigureArgs, what: &str, sweep: &str) -> String {
    format!(
        "# figure {} preset: {}\n# lambda_bs={} snr_db={} trials={} seed={} \
         window_eps={} window_factor={} sweep={}\n",
        args.id,
        what,
        args.lambda_bs,
        args.snr_db,
        args.sim.trials,
        args.sim.seed,
        args.sim.window_eps,
        args.sim.window_factor,
        sweep,
    )
}

/// Render the preset identified by `args.id` and write its CSV files.
pub fn cmd_figure(args: &FigureArgs) -> std::result::Result<Vec<PathBuf>, CliError> {
    let files = in_pool(args.sim.workers, || -> Result<Vec<CurveFile>> {
        match args.id {
            4 => figure4(args),
            5 => figure5(args),
            6 => figure6(args),
            7 => figure7(args),
            8 => figure8(args),
            _ => unreachable!("clap restricts the id to 4..=8"),
        }
    })??;

    fs::create_dir_all(&args.out)?;
    let mut paths = Vec::with_capacity(files.len());
    for f in files {
        let path = args.out.join(f.path);
        let mut w = fs::File::create(&path)?;
        w.write_all(f.content.as_bytes())?;
        paths.push(path);
    }
    Ok(paths)
}

fn sim_params(args: &FigureArgs, lambda_e: f64, alpha: f64) -> Result<NetworkParams> {
    NetworkParams::new(
        args.lambda_bs,
        lambda_e,
        alpha,
        SnrMode::from_db(args.snr_db),
    )
}

fn exact_params(args: &FigureArgs, lambda_e: f64, alpha: f64) -> Result<NetworkParams> {
    NetworkParams::new(args.lambda_bs, lambda_e, alpha, SnrMode::High)
}

const SWEEP_NOTE: &str = "lambda_e: 13 log-spaced points in [0.1, 10]";

/// Average secrecy rate vs eavesdropper density, nearest BS with full
/// information.
fn figure4(args: &FigureArgs) -> Result<Vec<CurveFile>> {
    let opts = args.sim.options();
    let grid = lambda_e_grid();
    let mut files = Vec::new();
    for &alpha in &args.alphas {
        let mut analytic_csv = preset_header(args, "mean secrecy rate, scenario s1", SWEEP_NOTE);
        analytic_csv.push_str("lambda_e,mean\n");
        let mut sim_csv = preset_header(args, "mean secrecy rate, scenario s1", SWEEP_NOTE);
        sim_csv.push_str("lambda_e,mean,stderr\n");
        for &le in &grid {
            let exact = analytic::mean_s1(&exact_params(args, le, alpha)?);
            analytic_csv.push_str(&format!("{le:.6},{exact:.6}\n"));
            let (mean, se) = estimate_mean(
                &sim_params(args, le, alpha)?,
                &ScenarioSpec::FullInfoNearest,
                args.sim.trials,
                args.sim.seed,
                &opts,
            )?;
            sim_csv.push_str(&format!("{le:.6},{mean:.6},{se:.6}\n"));
        }
        files.push(CurveFile {
            path: format!("fig4_analytic_alpha{alpha}.csv").into(),
            content: analytic_csv,
        });
        files.push(CurveFile {
            path: format!("fig4_simulated_alpha{alpha}.csv").into(),
            content: sim_csv,
        });
    }
    Ok(files)
}

/// Secure coverage probability vs eavesdropper density at thresholds 0 and
/// 5, optimal BS.
fn figure5(args: &FigureArgs) -> Result<Vec<CurveFile>> {
    let opts = args.sim.options();
    let law = CellAreaLaw::default();
    let grid = lambda_e_grid();
    let thresholds = [0.0, 5.0];
    let mut files = Vec::new();
    for &alpha in &args.alphas {
        // One simulation per density covers both thresholds.
        let mut survival = Vec::new();
        for &le in &grid {
            let ccdf = estimate_ccdf(
                &sim_params(args, le, alpha)?,
                &ScenarioSpec::FullInfoOptimal,
                &thresholds,
                args.sim.trials,
                args.sim.seed,
                &opts,
            )?;
            survival.push(ccdf);
        }
        for (ti, &r0) in thresholds.iter().enumerate() {
            let t = analytic::Threshold::new(r0)?;
            let mut analytic_csv = preset_header(
                args,
                "secure coverage probability, scenario s2",
                SWEEP_NOTE,
            );
            analytic_csv.push_str("lambda_e,lower,upper_pgfl,upper_voronoi\n");
            let mut sim_csv =
                preset_header(args, "secure coverage probability, scenario s2", SWEEP_NOTE);
            sim_csv.push_str("lambda_e,survival,stderr\n");
            for (i, &le) in grid.iter().enumerate() {
                let p = exact_params(args, le, alpha)?;
                analytic_csv.push_str(&format!(
                    "{le:.6},{:.6},{:.6},{:.6}\n",
                    analytic::ccdf_s2_lower(&p, &t),
                    analytic::ccdf_s2_upper_pgfl(&p, &t),
                    analytic::ccdf_s2_upper_voronoi(&p, &t, &law),
                ));
                sim_csv.push_str(&format!(
                    "{le:.6},{:.6},{:.6}\n",
                    survival[i].survival[ti], survival[i].stderr[ti],
                ));
            }
            files.push(CurveFile {
                path: format!("fig5_analytic_alpha{alpha}_r0{r0}.csv").into(),
                content: analytic_csv,
            });
            files.push(CurveFile {
                path: format!("fig5_simulated_alpha{alpha}_r0{r0}.csv").into(),
                content: sim_csv,
            });
        }
    }
    Ok(files)
}

/// Average secrecy rate vs eavesdropper density, optimal BS, with both
/// analytic bounds and the cell-area alternative.
fn figure6(args: &FigureArgs) -> Result<Vec<CurveFile>> {
    let opts = args.sim.options();
    let law = CellAreaLaw::default();
    let grid = lambda_e_grid();
    let mut files = Vec::new();
    for &alpha in &args.alphas {
        let mut analytic_csv =
            preset_header(args, "mean secrecy rate bounds, scenario s2", SWEEP_NOTE);
        analytic_csv.push_str("lambda_e,mean_lower,mean_upper,mean_voronoi\n");
        let mut sim_csv = preset_header(args, "mean secrecy rate, scenario s2", SWEEP_NOTE);
        sim_csv.push_str("lambda_e,mean,stderr\n");
        for &le in &grid {
            let p = exact_params(args, le, alpha)?;
            analytic_csv.push_str(&format!(
                "{le:.6},{:.6},{:.6},{:.6}\n",
                analytic::mean_s2_lower(&p),
                analytic::mean_s2_upper(&p),
                analytic::mean_s2_upper_voronoi(&p, &law),
            ));
            let (mean, se) = estimate_mean(
                &sim_params(args, le, alpha)?,
                &ScenarioSpec::FullInfoOptimal,
                args.sim.trials,
                args.sim.seed,
                &opts,
            )?;
            sim_csv.push_str(&format!("{le:.6},{mean:.6},{se:.6}\n"));
        }
        files.push(CurveFile {
            path: format!("fig6_analytic_alpha{alpha}.csv").into(),
            content: analytic_csv,
        });
        files.push(CurveFile {
            path: format!("fig6_simulated_alpha{alpha}.csv").into(),
            content: sim_csv,
        });
    }
    Ok(files)
}

/// Average secrecy rate vs eavesdropper density with intracell information
/// only, against the tractable lower bound.
fn figure7(args: &FigureArgs) -> Result<Vec<CurveFile>> {
    let opts = args.sim.options();
    let grid = lambda_e_grid();
    let mut files = Vec::new();
    for &alpha in &args.alphas {
        let mut analytic_csv =
            preset_header(args, "mean secrecy rate lower bound, scenario s3-cell", SWEEP_NOTE);
        analytic_csv.push_str("lambda_e,mean_lower_bound\n");
        let mut sim_csv =
            preset_header(args, "mean secrecy rate, scenario s3-cell", SWEEP_NOTE);
        sim_csv.push_str("lambda_e,mean,stderr\n");
        for &le in &grid {
            let bound = analytic::mean_s3_cell_lower(&exact_params(args, le, alpha)?);
            analytic_csv.push_str(&format!("{le:.6},{bound:.6}\n"));
            let (mean, se) = estimate_mean(
                &sim_params(args, le, alpha)?,
                &ScenarioSpec::CellInfoNearest,
                args.sim.trials,
                args.sim.seed,
                &opts,
            )?;
            sim_csv.push_str(&format!("{le:.6},{mean:.6},{se:.6}\n"));
        }
        files.push(CurveFile {
            path: format!("fig7_analytic_alpha{alpha}.csv").into(),
            content: analytic_csv,
        });
        files.push(CurveFile {
            path: format!("fig7_simulated_alpha{alpha}.csv").into(),
            content: sim_csv,
        });
    }
    Ok(files)
}

/// Average secrecy rate vs detection radius for the configured eavesdropper
/// densities.
fn figure8(args: &FigureArgs) -> Result<Vec<CurveFile>> {
    const SWEEP: &str = "d0: 0.25 to 5.0 in steps of 0.25";
    let opts = args.sim.options();
    let d0s = d0_grid();
    let mut files = Vec::new();
    for &alpha in &args.alphas {
        for &le in &args.lambda_es {
            let mut analytic_csv =
                preset_header(args, "mean secrecy rate vs detection radius", SWEEP);
            analytic_csv.push_str("d0,mean\n");
            let mut sim_csv =
                preset_header(args, "mean secrecy rate vs detection radius", SWEEP);
            sim_csv.push_str("d0,mean,stderr\n");
            let exact_p = exact_params(args, le, alpha)?;
            let sim_p = sim_params(args, le, alpha)?;
            for &d0 in &d0s {
                let exact = analytic::mean_s3_radius(&exact_p, d0)?;
                analytic_csv.push_str(&format!("{d0:.6},{exact:.6}\n"));
                let (mean, se) = estimate_mean(
                    &sim_p,
                    &ScenarioSpec::RadiusInfoNearest { d0 },
                    args.sim.trials,
                    args.sim.seed,
                    &opts,
                )?;
                sim_csv.push_str(&format!("{d0:.6},{mean:.6},{se:.6}\n"));
            }
            files.push(CurveFile {
                path: format!("fig8_analytic_alpha{alpha}_lambdae{le}.csv").into(),
                content: analytic_csv,
            });
            files.push(CurveFile {
                path: format!("fig8_simulated_alpha{alpha}_lambdae{le}.csv").into(),
                content: sim_csv,
            });
        }
    }
    Ok(files)
}
