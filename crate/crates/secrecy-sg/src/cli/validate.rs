//! Validation suites: empirical behaviour checked against closed-form laws,
//! with one PASS/FAIL line per check.

use std::io::Write;

use rayon::prelude::*;

use super::{CliError, GridArgs, ScenarioArg, SimArgs, SimulateArgs, Suite, ValidateArgs};
use crate::analytic::{self, NetworkParams, SnrMode, Threshold};
use crate::montecarlo::{coupled_trial_suite, estimate_ccdf, trial_rng, ScenarioSpec};
use crate::pointprocess::{
    estimate_origin_cell_area, nearest_distance, sample_ppp, window_radius_for, DiskWindow,
    Point,
};
use crate::specfun::CellAreaLaw;
use crate::stats::{gamma_cdf, ks_statistic, ks_threshold};
use crate::Result;

/// Probes per hit-or-miss cell-area estimate; keeps the probe noise variance
/// two orders below the cell-area variance.
const CELL_PROBES: u64 = 4_000;

struct Report<'a> {
    out: &'a mut dyn Write,
    all_pass: bool,
}

impl<'a> Report<'a> {
    fn new(out: &'a mut dyn Write) -> Self {
        Self {
            out,
            all_pass: true,
        }
    }

    fn check(
        &mut self,
        name: &str,
        stat: f64,
        tol: f64,
        pass: bool,
    ) -> std::io::Result<()> {
        self.all_pass &= pass;
        writeln!(
            self.out,
            "{} {name}: stat={stat:.6} tol={tol:.6}",
            if pass { "PASS" } else { "FAIL" }
        )
    }

    /// Convenience for "statistic must not exceed tolerance" checks.
    fn check_below(&mut self, name: &str, stat: f64, tol: f64) -> std::io::Result<()> {
        self.check(name, stat, tol, stat <= tol)
    }
}

/// Run one suite; `Ok(true)` iff every check passed.
pub fn cmd_validate(
    args: &ValidateArgs,
    out: &mut dyn Write,
) -> std::result::Result<bool, CliError> {
    let mut report = Report::new(out);
    match args.suite {
        Suite::Dmin => suite_dmin(args, &mut report)?,
        Suite::CellArea => suite_cell_area(args, &mut report)?,
        Suite::Bounds => suite_bounds(args, &mut report)?,
        Suite::Ordering => suite_ordering(args, &mut report)?,
        Suite::Determinism => suite_determinism(args, &mut report)?,
    }
    Ok(report.all_pass)
}

/// Cell-boundary distance of the typical generator: half the distance from
/// an added point to its nearest co-generator, against the survival law
/// exp(-4πλr²).
fn suite_dmin(
    args: &ValidateArgs,
    report: &mut Report<'_>,
) -> std::result::Result<(), CliError> {
    let lambda = args.network.lambda_bs;
    let p = NetworkParams::new(lambda, 1.0, args.network.alpha.max(2.5), SnrMode::High)?;
    let n = args.sim.trials as usize;
    // 1e-9 escape budget keeps the truncation error far below the KS noise.
    let window = DiskWindow::new(window_radius_for(1e-9, lambda)?)?;
    let samples: Vec<f64> = (0..n as u64)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let mut rng = trial_rng(args.sim.seed, i, 0);
            let pts = sample_ppp(lambda, window, &mut rng)?;
            Ok(nearest_distance(Point::ORIGIN, &pts)
                .map(|d| 0.5 * d)
                .unwrap_or(0.5 * window.radius()))
        })
        .collect::<Result<Vec<_>>>()?;
    let ks = ks_statistic(&samples, |r| {
        if r <= 0.0 {
            0.0
        } else {
            1.0 - analytic::dmin_survival(&p, r).unwrap_or(0.0)
        }
    })?;
    report.check_below("dmin/ks-vs-survival-law", ks, ks_threshold(n))?;
    Ok(())
}

/// Hit-or-miss Voronoi cell areas: unbiased mean, distributional agreement
/// with the gamma fit, and the fitted Laplace transform.
fn suite_cell_area(
    args: &ValidateArgs,
    report: &mut Report<'_>,
) -> std::result::Result<(), CliError> {
    let lambda_e = args.network.lambda_e;
    let n_cells = args.cells;
    let areas = sample_cell_areas(lambda_e, n_cells, args.sim.seed)?;
    let normalized: Vec<f64> = areas.iter().map(|a| a * lambda_e).collect();

    let mean: f64 = areas.iter().sum::<f64>() / areas.len() as f64;
    report.check_below(
        "cell-area/mean-vs-inverse-density",
        (mean - 1.0 / lambda_e).abs() * lambda_e,
        0.02,
    )?;

    let law = CellAreaLaw::default();
    let ks = ks_statistic(&normalized, |x| {
        gamma_cdf(law.shape(), law.rate(), x).unwrap_or(0.0)
    })?;
    report.check_below("cell-area/ks-vs-gamma-fit", ks, 0.05)?;

    for s in [0.1, 1.0, 10.0] {
        let empirical: f64 = normalized.iter().map(|v| (-s * v).exp()).sum::<f64>()
            / normalized.len() as f64;
        let fitted = (law.rate() / (law.rate() + s)).powf(law.shape());
        report.check_below(
            &format!("cell-area/laplace-s{s}"),
            (empirical - fitted).abs(),
            0.03,
        )?;
    }
    Ok(())
}

/// Draw hit-or-miss estimates of the origin cell area under eavesdropper
/// density `lambda_e`. The probe window takes a 25% margin over the escape
/// radius and the eavesdropper window doubles it, so every point that could
/// exclude a probe is observed.
pub(crate) fn sample_cell_areas(lambda_e: f64, n_cells: u64, seed: u64) -> Result<Vec<f64>> {
    let probe_window = DiskWindow::new(1.25 * window_radius_for(1e-6, lambda_e)?)?;
    let eve_window = DiskWindow::new(2.0 * probe_window.radius())?;
    (0..n_cells)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i, 0);
            let eves = sample_ppp(lambda_e, eve_window, &mut rng)?;
            estimate_origin_cell_area(&eves, probe_window, CELL_PROBES, &mut rng)
        })
        .collect()
}

/// Best-BS empirical CCDF must sit inside its analytic bracket, and at
/// threshold zero must match the cell-area coverage expression.
fn suite_bounds(
    args: &ValidateArgs,
    report: &mut Report<'_>,
) -> std::result::Result<(), CliError> {
    let opts = args.sim.options();
    let law = CellAreaLaw::default();
    let grid: Vec<f64> = (0..=12).map(|i| 0.5 * i as f64).collect();
    for &alpha in &[2.5, 4.0] {
        for &lambda_e in &[0.1, 1.0, 10.0] {
            let p = NetworkParams::new(args.network.lambda_bs, lambda_e, alpha, SnrMode::High)?;
            let ccdf = estimate_ccdf(
                &p,
                &ScenarioSpec::FullInfoOptimal,
                &grid,
                args.sim.trials,
                args.sim.seed,
                &opts,
            )?;
            // Worst signed violation of the bracket, in standard errors.
            let mut worst = 0.0_f64;
            for (i, &r0) in grid.iter().enumerate() {
                let t = Threshold::new(r0)?;
                let lower = analytic::ccdf_s2_lower(&p, &t);
                let upper = analytic::ccdf_s2_upper_pgfl(&p, &t);
                let se = ccdf.stderr[i].max(1e-12);
                worst = worst
                    .max((lower - ccdf.survival[i]) / se)
                    .max((ccdf.survival[i] - upper) / se);
            }
            report.check_below(
                &format!("bounds/bracket-alpha{alpha}-lambdae{lambda_e}"),
                worst,
                3.0,
            )?;
            let exact0 = analytic::coverage_s2_exact_r0zero(&p, &law);
            report.check_below(
                &format!("bounds/coverage-r0-zero-alpha{alpha}-lambdae{lambda_e}"),
                (ccdf.survival[0] - exact0).abs(),
                3.0 * ccdf.stderr[0] + 0.01,
            )?;
        }
    }
    Ok(())
}

/// Per-realization scenario orderings, finite-vs-high SNR dominance, and
/// monotonicity in the detection radius on coupled realizations.
fn suite_ordering(
    args: &ValidateArgs,
    report: &mut Report<'_>,
) -> std::result::Result<(), CliError> {
    let opts = args.sim.options();
    let snr = SnrMode::from_db(args.network.snr_db.unwrap_or(20.0));
    let p = NetworkParams::new(
        args.network.lambda_bs,
        args.network.lambda_e,
        args.network.alpha,
        snr,
    )?;
    let n = args.sim.trials;

    let violations: Vec<(u64, u64, u64)> = (0..n)
        .into_par_iter()
        .map(|i| -> Result<(u64, u64, u64)> {
            let out = coupled_trial_suite(&p, args.d0, &opts, args.sim.seed, i)?;
            let fin = out.finite.expect("finite mode configured");
            let scenario_ordering = u64::from(!out.high.ordered() || !fin.ordered());
            let snr_ordering = u64::from(
                fin.s1 > out.high.s1
                    || fin.s2 > out.high.s2
                    || fin.s3_cell > out.high.s3_cell
                    || fin.s3_radius > out.high.s3_radius,
            );
            let indicator = u64::from(
                ((fin.s1 > 0.0) != (out.high.s1 > 0.0))
                    || ((fin.s2 > 0.0) != (out.high.s2 > 0.0))
                    || ((fin.s3_cell > 0.0) != (out.high.s3_cell > 0.0))
                    || ((fin.s3_radius > 0.0) != (out.high.s3_radius > 0.0)),
            );
            Ok((scenario_ordering, snr_ordering, indicator))
        })
        .collect::<Result<Vec<_>>>()?;
    let (mut a, mut b, mut c) = (0u64, 0u64, 0u64);
    for (x, y, z) in violations {
        a += x;
        b += y;
        c += z;
    }
    report.check("ordering/scenario-chains", a as f64, 0.0, a == 0)?;
    report.check("ordering/finite-below-high-snr", b as f64, 0.0, b == 0)?;
    report.check("ordering/positivity-indicators", c as f64, 0.0, c == 0)?;

    // Detection-radius monotonicity on shared realizations.
    let mono_trials = n.min(500);
    let mut mono_violations = 0u64;
    for i in 0..mono_trials {
        let mut prev = 0.0;
        for d0 in [0.5, 1.0, 2.0, 4.0] {
            let out = coupled_trial_suite(&p, d0, &opts, args.sim.seed, i)?;
            if out.high.s3_radius < prev {
                mono_violations += 1;
            }
            prev = out.high.s3_radius;
        }
    }
    report.check(
        "ordering/monotone-in-detection-radius",
        mono_violations as f64,
        0.0,
        mono_violations == 0,
    )?;
    Ok(())
}

/// The estimator and the CSV it renders must be bit-identical across worker
/// counts.
fn suite_determinism(
    args: &ValidateArgs,
    report: &mut Report<'_>,
) -> std::result::Result<(), CliError> {
    let sim_args = SimulateArgs {
        scenario: ScenarioArg::S1,
        d0: None,
        network: args.network.clone(),
        grid: GridArgs {
            r0_min: 0.0,
            r0_max: 6.0,
            r0_step: 0.5,
        },
        sim: SimArgs {
            workers: None,
            ..args.sim.clone()
        },
        out: None,
    };
    let p = args.network.params()?;
    let grid = sim_args.grid.build()?;
    let opts = args.sim.options();
    let mut renders = Vec::new();
    for workers in [1usize, 8] {
        let ccdf = super::in_pool(Some(workers), || {
            estimate_ccdf(
                &p,
                &ScenarioSpec::FullInfoNearest,
                &grid,
                args.sim.trials,
                args.sim.seed,
                &opts,
            )
        })??;
        renders.push(super::render_simulate_csv(&sim_args, &ccdf));
    }
    let identical = renders[0] == renders[1];
    report.check(
        "determinism/csv-bytes-workers-1-vs-8",
        f64::from(u8::from(identical)),
        1.0,
        identical,
    )?;

    // The survival law itself should also look sane here: at threshold zero
    // half the trials clear the rate for equal densities.
    if (args.network.lambda_bs - args.network.lambda_e).abs() < 1e-12 {
        let rendered = &renders[0];
        let survival0: f64 = rendered
            .lines()
            .find(|l| l.starts_with("0.000000,"))
            .and_then(|l| l.split(',').nth(1))
            .and_then(|v| v.parse().ok())
            .unwrap_or(f64::NAN);
        let tol = 4.0 / (args.sim.trials as f64).sqrt();
        report.check_below(
            "determinism/coverage-sanity-at-zero",
            (survival0 - 0.5).abs(),
            tol,
        )?;
    }
    Ok(())
}
