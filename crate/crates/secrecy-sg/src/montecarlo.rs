//! Per-realization secrecy-rate trials and deterministic parallel
//! CCDF/mean estimation.
//!
//! Every trial owns a random stream derived from (master seed, trial index,
//! redraw attempt) by a counter-based mix, so results are bit-identical for
//! any worker count: the parallel map collects outcomes in trial order and
//! all reductions run over that fixed order.

use rayon::prelude::*;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analytic::{NetworkParams, SnrMode};
use crate::pointprocess::{
    half_nn_distance, nearest_distance, sample_ppp, window_radius_for, DiskWindow, Point,
    PointSet,
};
use crate::{Error, Result};

/// Which cell-association and information model a trial follows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScenarioSpec {
    /// All eavesdropper locations known; the nearest BS serves.
    FullInfoNearest,
    /// All eavesdropper locations known; the rate-maximizing BS serves.
    FullInfoOptimal,
    /// Only intracell eavesdroppers known; the nearest BS serves. Unknown
    /// territory is capped at the serving cell's boundary distance.
    CellInfoNearest,
    /// Eavesdroppers within `d0` of the serving BS known; the nearest BS
    /// serves.
    RadiusInfoNearest { d0: f64 },
}

impl ScenarioSpec {
    fn validate(&self) -> Result<()> {
        if let ScenarioSpec::RadiusInfoNearest { d0 } = self {
            if !(*d0 >= 0.0) {
                return Err(Error::Domain(format!(
                    "detection radius must satisfy d0 >= 0, got {d0}"
                )));
            }
        }
        Ok(())
    }
}

/// Simulation-window policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    /// Probability budget for the nearest relevant point escaping the
    /// window.
    pub window_epsilon: f64,
    /// Enlargement factor for the BS window under optimal association; the
    /// best BS can sit anywhere in the origin's eavesdropper-Voronoi cell.
    pub window_factor: f64,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            window_epsilon: 1e-6,
            window_factor: 3.0,
        }
    }
}

impl SimOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.window_epsilon > 0.0 && self.window_epsilon < 1.0) {
            return Err(Error::Domain(format!(
                "window epsilon must satisfy 0 < eps < 1, got {}",
                self.window_epsilon
            )));
        }
        if !(self.window_factor >= 1.0 && self.window_factor.is_finite()) {
            return Err(Error::Domain(format!(
                "window factor must be >= 1, got {}",
                self.window_factor
            )));
        }
        Ok(())
    }
}

/// One realization's secrecy rate plus the distances that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    /// Achievable secrecy rate, clipped at zero (bits per channel use).
    pub rate: f64,
    /// Distance from the typical user to the serving BS.
    pub r_u: f64,
    /// Effective distance from the serving BS to the worst-case
    /// eavesdropper, after any information cap.
    pub d_detrimental: f64,
    /// Serving cell's boundary distance; present for the intracell scenario
    /// only.
    pub d_min: Option<f64>,
    /// True when a window boundary stood in for an unobserved point.
    pub truncated: bool,
    /// Empty-BS-window redraws consumed by this trial.
    pub redraws: u32,
}

/// Empirical survival function of the secrecy rate over a threshold grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCcdf {
    pub thresholds: Vec<f64>,
    /// survival[i] = fraction of trials with rate strictly above
    /// thresholds[i].
    pub survival: Vec<f64>,
    /// Binomial standard error sqrt(p(1-p)/n) per threshold.
    pub stderr: Vec<f64>,
    pub n_trials: u64,
    pub mean_rate: f64,
    pub mean_stderr: f64,
    /// Fraction of trials where a window boundary capped a distance.
    pub truncation_fraction: f64,
    /// Total empty-window redraws across all trials.
    pub total_redraws: u64,
}

const MAX_REDRAWS: u64 = 64;

/// SplitMix64 finalizer.
fn avalanche(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn absorb(state: u64, value: u64) -> u64 {
    avalanche(
        state
            .wrapping_add(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(value),
    )
}

/// Counter-based per-trial stream: a ChaCha8 generator seeded from
/// (master seed, trial index, redraw attempt).
pub(crate) fn trial_rng(master_seed: u64, trial_index: u64, attempt: u64) -> ChaCha8Rng {
    let state = absorb(absorb(absorb(0, master_seed), trial_index), attempt);
    let mut seed = [0u8; 32];
    for (j, chunk) in seed.chunks_mut(8).enumerate() {
        chunk.copy_from_slice(&avalanche(state.wrapping_add(j as u64 + 1)).to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}

fn windows_for(
    p: &NetworkParams,
    scenario: &ScenarioSpec,
    opts: &SimOptions,
) -> Result<(DiskWindow, DiskWindow)> {
    let base = window_radius_for(opts.window_epsilon, p.lambda_bs().min(p.lambda_e()))?;
    let k = if matches!(scenario, ScenarioSpec::FullInfoOptimal) {
        opts.window_factor
    } else {
        1.0
    };
    Ok((DiskWindow::new(base * k)?, DiskWindow::new(base)?))
}

fn sample_realization(
    p: &NetworkParams,
    bs_window: DiskWindow,
    eve_window: DiskWindow,
    master_seed: u64,
    trial_index: u64,
) -> Result<(PointSet, PointSet, u32)> {
    for attempt in 0..MAX_REDRAWS {
        let mut rng = trial_rng(master_seed, trial_index, attempt);
        let bs = sample_ppp(p.lambda_bs(), bs_window, &mut rng)?;
        if bs.is_empty() {
            // The window was sized so this happens with probability at most
            // epsilon; redraw on a fresh derived substream.
            continue;
        }
        let eves = sample_ppp(p.lambda_e(), eve_window, &mut rng)?;
        return Ok((bs, eves, attempt as u32));
    }
    Err(Error::Argument(format!(
        "no base station after {MAX_REDRAWS} redraws; the window budget is misconfigured"
    )))
}

/// Secrecy rate for serving distance `r_u` and worst-case eavesdropper
/// distance `d_e`, clipped at zero.
pub fn secrecy_rate(alpha: f64, snr: SnrMode, r_u: f64, d_e: f64) -> f64 {
    if d_e <= r_u {
        return 0.0;
    }
    unclipped_rate(alpha, snr, r_u, d_e)
}

/// The pre-clipping rate; negative when the eavesdropper outranks the user.
fn unclipped_rate(alpha: f64, snr: SnrMode, r_u: f64, d_e: f64) -> f64 {
    match snr {
        SnrMode::High => alpha * (d_e / r_u).log2(),
        SnrMode::Finite(s) => {
            let user = 1.0 + s * r_u.powf(-alpha);
            let eve = 1.0 + s * d_e.powf(-alpha);
            (user / eve).log2()
        }
    }
}

/// Index of the serving BS: minimal (distance, x, y) lexicographically, so
/// probability-zero ties still resolve deterministically.
fn serving_index(bs: &[Point]) -> usize {
    let key = |p: &Point| (p.norm(), p.x, p.y);
    let mut best = 0;
    for i in 1..bs.len() {
        let (ad, ax, ay) = key(&bs[i]);
        let (bd, bx, by) = key(&bs[best]);
        if (ad, ax, ay) < (bd, bx, by) {
            best = i;
        }
    }
    best
}

/// Distance from `from` to its nearest eavesdropper, or the worst-case cap
/// at the eavesdropper window boundary when none was observed.
fn nearest_eve_or_cap(from: Point, eves: &PointSet) -> (f64, bool) {
    match nearest_distance(from, eves) {
        Some(d) => (d, false),
        None => ((eves.window().radius() - from.norm()).max(0.0), true),
    }
}

/// Evaluate one explicit realization under a scenario.
///
/// `bs` and `eves` carry their own windows; window boundaries double as
/// worst-case caps whenever a needed point was not observed, and such trials
/// come back with `truncated` set.
pub fn evaluate_realization(
    p: &NetworkParams,
    scenario: &ScenarioSpec,
    bs: &PointSet,
    eves: &PointSet,
) -> Result<TrialOutcome> {
    scenario.validate()?;
    if bs.is_empty() {
        return Err(Error::Argument(
            "a realization needs at least one base station".into(),
        ));
    }

    if let ScenarioSpec::FullInfoOptimal = scenario {
        return Ok(evaluate_optimal(p, bs, eves));
    }

    let serving = serving_index(bs.points());
    let x0 = bs.points()[serving];
    let r_u = x0.norm();
    let (d_eve, mut truncated) = nearest_eve_or_cap(x0, eves);

    let (d_detrimental, d_min) = match scenario {
        ScenarioSpec::FullInfoNearest => (d_eve, None),
        ScenarioSpec::CellInfoNearest => {
            let d_min = match half_nn_distance(bs, serving)? {
                Some(d) => d,
                None => {
                    // Sole BS in the window: the nearest co-generator can sit
                    // just outside it.
                    truncated = true;
                    0.5 * (bs.window().radius() - r_u).max(0.0)
                }
            };
            (d_eve.min(d_min), Some(d_min))
        }
        ScenarioSpec::RadiusInfoNearest { d0 } => (d_eve.min(*d0), None),
        ScenarioSpec::FullInfoOptimal => unreachable!(),
    };

    Ok(TrialOutcome {
        rate: secrecy_rate(p.alpha(), p.snr(), r_u, d_detrimental),
        r_u,
        d_detrimental,
        d_min,
        truncated,
        redraws: 0,
    })
}

/// Best-BS association: maximize the per-BS rate over every sampled BS and
/// report the maximizer's geometry.
///
/// Candidates are scanned outward. A BS at distance r has its nearest
/// eavesdropper within r + d0e of it (d0e = the origin's nearest
/// eavesdropper), so no SNR mode can push its rate above
/// alpha·log2(1 + d0e/r), which decreases in r; once that envelope drops
/// strictly below the incumbent the remaining candidates cannot win and the
/// scan stops. Ties are unaffected: only strictly hopeless tails are cut.
fn evaluate_optimal(p: &NetworkParams, bs: &PointSet, eves: &PointSet) -> TrialOutcome {
    let mut order: Vec<(f64, f64, f64, u32)> = bs
        .points()
        .iter()
        .enumerate()
        .map(|(i, p)| (p.norm(), p.x, p.y, i as u32))
        .collect();
    order.sort_unstable_by(|a, b| a.partial_cmp(b).expect("window points are finite"));
    let origin_eve = nearest_distance(Point::ORIGIN, eves);

    let mut truncated = false;
    let mut best_value = f64::NEG_INFINITY;
    let mut best_key = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
    let mut best_geom = (0.0, 0.0);
    for (r, _, _, idx) in order {
        let x = bs.points()[idx as usize];
        if let Some(d0e) = origin_eve {
            if best_value > 0.0
                && r > 0.0
                && p.alpha() * (1.0 + d0e / r).log2() < best_value
            {
                break;
            }
        }
        let (value, d_e, trunc) = candidate_value(p, x, r, eves, best_value);
        truncated |= trunc;
        let Some(d_e) = d_e else { continue };
        let key = (r, x.x, x.y);
        if value > best_value || (value == best_value && key < best_key) {
            best_value = value;
            best_key = key;
            best_geom = (r, d_e);
        }
    }
    TrialOutcome {
        rate: best_value.max(0.0),
        r_u: best_geom.0,
        d_detrimental: best_geom.1,
        d_min: None,
        truncated,
        redraws: 0,
    }
}

/// Value of one candidate BS, with an exact early abort: the incumbent value
/// inverts into the eavesdropper distance the candidate would need, and the
/// eve scan stops once its running minimum falls strictly below that. Only
/// strictly hopeless candidates abort (returning `None` for the distance),
/// so the maximizer and all ties are untouched.
fn candidate_value(
    p: &NetworkParams,
    x: Point,
    r: f64,
    eves: &PointSet,
    incumbent: f64,
) -> (f64, Option<f64>, bool) {
    if eves.is_empty() {
        let d_e = (eves.window().radius() - r).max(0.0);
        let value = if d_e <= 0.0 {
            f64::NEG_INFINITY
        } else if r > 0.0 {
            unclipped_rate(p.alpha(), p.snr(), r, d_e)
        } else {
            f64::INFINITY
        };
        return (value, Some(d_e), true);
    }
    if r == 0.0 {
        // A BS on top of the user: infinite rate unless an eve sits there too.
        let d_e = nearest_distance(x, eves).expect("nonempty");
        let value = if d_e > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
        return (value, Some(d_e), false);
    }
    let hopeless_below = match p.snr() {
        _ if incumbent == f64::NEG_INFINITY => 0.0,
        SnrMode::High => r * (incumbent / p.alpha()).exp2(),
        SnrMode::Finite(s) => {
            let c = (1.0 + s * r.powf(-p.alpha())) / incumbent.exp2() - 1.0;
            if c <= 0.0 {
                // Even an infinitely distant eve cannot lift this candidate
                // strictly above the incumbent.
                return (f64::NEG_INFINITY, None, false);
            }
            (s / c).powf(1.0 / p.alpha())
        }
    };
    let mut min_d = f64::INFINITY;
    for e in eves.points() {
        min_d = min_d.min(x.distance(*e));
        if min_d < hopeless_below {
            return (f64::NEG_INFINITY, None, false);
        }
    }
    let value = if min_d > 0.0 {
        unclipped_rate(p.alpha(), p.snr(), r, min_d)
    } else {
        f64::NEG_INFINITY
    };
    (value, Some(min_d), false)
}

/// Sample one realization and evaluate it under `scenario`.
pub fn run_trial(
    p: &NetworkParams,
    scenario: &ScenarioSpec,
    opts: &SimOptions,
    master_seed: u64,
    trial_index: u64,
) -> Result<TrialOutcome> {
    opts.validate()?;
    scenario.validate()?;
    let (bs_window, eve_window) = windows_for(p, scenario, opts)?;
    let (bs, eves, redraws) =
        sample_realization(p, bs_window, eve_window, master_seed, trial_index)?;
    let mut outcome = evaluate_realization(p, scenario, &bs, &eves)?;
    outcome.redraws = redraws;
    Ok(outcome)
}

/// Estimate the secrecy-rate CCDF on a sorted threshold grid.
///
/// Deterministic: identical inputs give bit-identical output regardless of
/// how many rayon workers execute the trials.
pub fn estimate_ccdf(
    p: &NetworkParams,
    scenario: &ScenarioSpec,
    grid: &[f64],
    n_trials: u64,
    master_seed: u64,
    opts: &SimOptions,
) -> Result<EmpiricalCcdf> {
    if grid.is_empty() {
        return Err(Error::Argument("threshold grid must be nonempty".into()));
    }
    if grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::Argument(
            "threshold grid must be sorted ascending".into(),
        ));
    }
    if n_trials == 0 {
        return Err(Error::Argument("need at least one trial".into()));
    }
    opts.validate()?;
    scenario.validate()?;

    let outcomes: Vec<TrialOutcome> = (0..n_trials)
        .into_par_iter()
        .map(|i| run_trial(p, scenario, opts, master_seed, i))
        .collect::<Result<Vec<_>>>()?;

    // Reductions in trial order keep sums independent of scheduling.
    let n = n_trials as f64;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut truncation_count = 0u64;
    let mut total_redraws = 0u64;
    for o in &outcomes {
        sum += o.rate;
        sum_sq += o.rate * o.rate;
        truncation_count += u64::from(o.truncated);
        total_redraws += u64::from(o.redraws);
    }
    let mean_rate = sum / n;
    let mean_stderr = if n_trials > 1 {
        (((sum_sq - n * mean_rate * mean_rate) / (n - 1.0)).max(0.0) / n).sqrt()
    } else {
        0.0
    };

    let mut rates: Vec<f64> = outcomes.iter().map(|o| o.rate).collect();
    rates.sort_by(f64::total_cmp);
    let mut survival = Vec::with_capacity(grid.len());
    let mut stderr = Vec::with_capacity(grid.len());
    for &r0 in grid {
        let above = rates.len() - rates.partition_point(|&r| r <= r0);
        let s = above as f64 / n;
        survival.push(s);
        stderr.push((s * (1.0 - s) / n).sqrt());
    }

    Ok(EmpiricalCcdf {
        thresholds: grid.to_vec(),
        survival,
        stderr,
        n_trials,
        mean_rate,
        mean_stderr,
        truncation_fraction: truncation_count as f64 / n,
        total_redraws,
    })
}

/// Sample mean and standard error of the secrecy rate.
pub fn estimate_mean(
    p: &NetworkParams,
    scenario: &ScenarioSpec,
    n_trials: u64,
    master_seed: u64,
    opts: &SimOptions,
) -> Result<(f64, f64)> {
    let ccdf = estimate_ccdf(p, scenario, &[0.0], n_trials, master_seed, opts)?;
    Ok((ccdf.mean_rate, ccdf.mean_stderr))
}

/// Rates of all four scenarios on one shared realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioRates {
    pub s1: f64,
    pub s2: f64,
    pub s3_cell: f64,
    pub s3_radius: f64,
}

impl ScenarioRates {
    /// The coupling guarantees: both limited-information rates are dominated
    /// by the full-information nearest-BS rate, which the optimal-BS rate
    /// dominates in turn.
    pub fn ordered(&self) -> bool {
        self.s3_cell <= self.s1 && self.s3_radius <= self.s1 && self.s1 <= self.s2
    }
}

/// Outcome of evaluating every scenario on the same point-process
/// realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledOutcome {
    /// Rates in the pure path-loss limit.
    pub high: ScenarioRates,
    /// Rates at the configured finite SNR; `None` when the parameters are in
    /// high-SNR mode.
    pub finite: Option<ScenarioRates>,
    pub truncated: bool,
    pub redraws: u32,
}

/// Evaluate all four scenarios (and both SNR modes) on one realization.
///
/// The realization uses the enlarged best-BS window so the optimal search
/// scans a superset of the nearest-BS candidates; the per-realization
/// orderings then hold by construction.
pub fn coupled_trial_suite(
    p: &NetworkParams,
    d0: f64,
    opts: &SimOptions,
    master_seed: u64,
    trial_index: u64,
) -> Result<CoupledOutcome> {
    opts.validate()?;
    if !(d0 >= 0.0) {
        return Err(Error::Domain(format!(
            "detection radius must satisfy d0 >= 0, got {d0}"
        )));
    }
    let (bs_window, eve_window) = windows_for(p, &ScenarioSpec::FullInfoOptimal, opts)?;
    let (bs, eves, redraws) =
        sample_realization(p, bs_window, eve_window, master_seed, trial_index)?;

    let mut truncated = false;
    let mut rates_for = |snr: SnrMode| -> Result<ScenarioRates> {
        let q = p.with_snr(snr)?;
        let s1 = evaluate_realization(&q, &ScenarioSpec::FullInfoNearest, &bs, &eves)?;
        let s2 = evaluate_realization(&q, &ScenarioSpec::FullInfoOptimal, &bs, &eves)?;
        let s3c = evaluate_realization(&q, &ScenarioSpec::CellInfoNearest, &bs, &eves)?;
        let s3r =
            evaluate_realization(&q, &ScenarioSpec::RadiusInfoNearest { d0 }, &bs, &eves)?;
        truncated |= s1.truncated || s2.truncated || s3c.truncated || s3r.truncated;
        Ok(ScenarioRates {
            s1: s1.rate,
            s2: s2.rate,
            s3_cell: s3c.rate,
            s3_radius: s3r.rate,
        })
    };

    let high = rates_for(SnrMode::High)?;
    let finite = match p.snr() {
        SnrMode::High => None,
        SnrMode::Finite(_) => Some(rates_for(p.snr())?),
    };
    Ok(CoupledOutcome {
        high,
        finite,
        truncated,
        redraws,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::NetworkParams;
    use approx::assert_relative_eq;

    fn params(alpha: f64, snr: SnrMode) -> NetworkParams {
        NetworkParams::new(1.0, 1.0, alpha, snr).unwrap()
    }

    fn set(points: &[(f64, f64)], radius: f64) -> PointSet {
        PointSet::new(
            points.iter().map(|&(x, y)| Point::new(x, y)).collect(),
            1.0,
            DiskWindow::new(radius).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn hand_geometry_full_info_nearest() {
        // One BS at distance 1, one eavesdropper 2 away from it: the rate is
        // α·log2 of the BS-to-eve over user-to-BS distance ratio.
        let p = params(4.0, SnrMode::High);
        let bs = set(&[(1.0, 0.0)], 100.0);
        let eves = set(&[(3.0, 0.0)], 100.0);
        let out =
            evaluate_realization(&p, &ScenarioSpec::FullInfoNearest, &bs, &eves).unwrap();
        assert_relative_eq!(out.r_u, 1.0);
        assert_relative_eq!(out.d_detrimental, 2.0);
        assert_relative_eq!(out.rate, 4.0 * 2.0_f64.log2(), epsilon = 1e-12);
        assert!(!out.truncated);
        assert_eq!(out.d_min, None);
    }

    #[test]
    fn hand_geometry_eavesdropper_closer_than_user() {
        // Eve 0.5 away from the BS while the user is 1 away: clipped to zero
        // in any scenario and either SNR mode.
        for snr in [SnrMode::High, SnrMode::Finite(100.0)] {
            for scenario in [
                ScenarioSpec::FullInfoNearest,
                ScenarioSpec::FullInfoOptimal,
                ScenarioSpec::CellInfoNearest,
                ScenarioSpec::RadiusInfoNearest { d0: 10.0 },
            ] {
                let p = params(3.5, snr);
                let bs = set(&[(1.0, 0.0)], 100.0);
                let eves = set(&[(0.5, 0.0)], 100.0);
                let out = evaluate_realization(&p, &scenario, &bs, &eves).unwrap();
                assert_eq!(out.rate, 0.0, "{scenario:?} {snr:?}");
            }
        }
    }

    #[test]
    fn hand_geometry_cell_boundary_cap_binds() {
        // Second BS at 2.5 puts the cell boundary at 0.75 from the serving
        // BS; that cap undercuts the actual eavesdropper at 2.5 and clips
        // the rate to zero.
        let p = params(4.0, SnrMode::High);
        let bs = set(&[(1.0, 0.0), (2.5, 0.0)], 100.0);
        let eves = set(&[(3.5, 0.0)], 100.0);
        let out =
            evaluate_realization(&p, &ScenarioSpec::CellInfoNearest, &bs, &eves).unwrap();
        assert_relative_eq!(out.d_min.unwrap(), 0.75);
        assert_relative_eq!(out.d_detrimental, 0.75);
        assert_eq!(out.rate, 0.0);
    }

    #[test]
    fn optimal_association_prefers_the_secure_bs() {
        // The nearest BS has an eavesdropper on top of it; a farther BS with
        // a clear neighborhood provides the positive rate.
        let p = params(4.0, SnrMode::High);
        let bs = set(&[(1.0, 0.0), (-3.0, 0.0)], 100.0);
        let eves = set(&[(1.2, 0.0)], 100.0);
        let nearest =
            evaluate_realization(&p, &ScenarioSpec::FullInfoNearest, &bs, &eves).unwrap();
        let optimal =
            evaluate_realization(&p, &ScenarioSpec::FullInfoOptimal, &bs, &eves).unwrap();
        assert_eq!(nearest.rate, 0.0);
        assert_relative_eq!(optimal.r_u, 3.0);
        assert_relative_eq!(optimal.d_detrimental, 4.2);
        assert_relative_eq!(optimal.rate, 4.0 * (4.2_f64 / 3.0).log2(), epsilon = 1e-12);
        assert!(optimal.rate > nearest.rate);
    }

    #[test]
    fn empty_eve_window_caps_at_the_boundary() {
        let p = params(4.0, SnrMode::High);
        let bs = set(&[(1.0, 0.0)], 5.0);
        let eves = set(&[], 5.0);
        let out =
            evaluate_realization(&p, &ScenarioSpec::FullInfoNearest, &bs, &eves).unwrap();
        assert!(out.truncated);
        assert_relative_eq!(out.d_detrimental, 4.0);
        assert_relative_eq!(out.rate, 4.0 * 4.0_f64.log2(), epsilon = 1e-12);
    }

    #[test]
    fn sole_bs_caps_the_cell_boundary_distance() {
        let p = params(4.0, SnrMode::High);
        let bs = set(&[(1.0, 0.0)], 5.0);
        let eves = set(&[(2.0, 0.0)], 5.0);
        let out =
            evaluate_realization(&p, &ScenarioSpec::CellInfoNearest, &bs, &eves).unwrap();
        assert!(out.truncated);
        assert_relative_eq!(out.d_min.unwrap(), 2.0); // (5 - 1) / 2
        assert_relative_eq!(out.d_detrimental, 1.0); // the actual eve is closer
    }

    #[test]
    fn finite_snr_never_exceeds_high_snr() {
        let high = params(4.0, SnrMode::High);
        let fin = params(4.0, SnrMode::Finite(100.0));
        let bs = set(&[(0.8, 0.3)], 100.0);
        let eves = set(&[(2.5, -1.0)], 100.0);
        let h = evaluate_realization(&high, &ScenarioSpec::FullInfoNearest, &bs, &eves)
            .unwrap();
        let f = evaluate_realization(&fin, &ScenarioSpec::FullInfoNearest, &bs, &eves)
            .unwrap();
        assert!(f.rate <= h.rate);
        assert!(f.rate > 0.0);
    }

    #[test]
    fn run_trial_is_deterministic() {
        let p = params(4.0, SnrMode::High);
        let opts = SimOptions::default();
        let a = run_trial(&p, &ScenarioSpec::FullInfoNearest, &opts, 42, 7).unwrap();
        let b = run_trial(&p, &ScenarioSpec::FullInfoNearest, &opts, 42, 7).unwrap();
        assert_eq!(a, b);
        let c = run_trial(&p, &ScenarioSpec::FullInfoNearest, &opts, 42, 8).unwrap();
        assert_ne!(a, c, "distinct trial indices must explore distinct realizations");
    }

    #[test]
    fn estimate_ccdf_validates_arguments() {
        let p = params(4.0, SnrMode::High);
        let opts = SimOptions::default();
        let s = ScenarioSpec::FullInfoNearest;
        assert!(estimate_ccdf(&p, &s, &[], 10, 1, &opts).is_err());
        assert!(estimate_ccdf(&p, &s, &[1.0, 0.5], 10, 1, &opts).is_err());
        assert!(estimate_ccdf(&p, &s, &[0.0], 0, 1, &opts).is_err());
        let bad = SimOptions {
            window_epsilon: 0.0,
            window_factor: 3.0,
        };
        assert!(estimate_ccdf(&p, &s, &[0.0], 10, 1, &bad).is_err());
    }

    #[test]
    fn survival_is_nonincreasing_and_errors_match_counts() {
        let p = params(4.0, SnrMode::High);
        let grid: Vec<f64> = (0..7).map(|i| i as f64).collect();
        let out = estimate_ccdf(
            &p,
            &ScenarioSpec::FullInfoNearest,
            &grid,
            2_000,
            99,
            &SimOptions::default(),
        )
        .unwrap();
        assert!(out.survival.windows(2).all(|w| w[0] >= w[1]));
        for (s, e) in out.survival.iter().zip(&out.stderr) {
            assert_relative_eq!(*e, (s * (1.0 - s) / 2_000.0).sqrt(), epsilon = 1e-12);
        }
    }

    #[test]
    fn coupled_suite_obeys_the_orderings() {
        let p = params(4.0, SnrMode::Finite(100.0));
        let opts = SimOptions::default();
        for seed in 0..200 {
            let out = coupled_trial_suite(&p, 1.0, &opts, seed, 0).unwrap();
            assert!(out.high.ordered(), "high-SNR ordering broke at seed {seed}");
            let fin = out.finite.unwrap();
            assert!(fin.ordered(), "finite-SNR ordering broke at seed {seed}");
            for (f, h) in [
                (fin.s1, out.high.s1),
                (fin.s2, out.high.s2),
                (fin.s3_cell, out.high.s3_cell),
                (fin.s3_radius, out.high.s3_radius),
            ] {
                assert!(f <= h, "finite rate above high-SNR rate at seed {seed}");
            }
        }
    }

    #[test]
    fn coupled_suite_detection_radius_beyond_window_matches_s1() {
        let p = params(4.0, SnrMode::High);
        let opts = SimOptions::default();
        // Larger than any possible BS-to-eve distance in the windows.
        let d0 = 1_000.0;
        for seed in 0..50 {
            let out = coupled_trial_suite(&p, d0, &opts, seed, 0).unwrap();
            assert_eq!(out.high.s3_radius, out.high.s1);
        }
    }

    #[test]
    fn radius_rate_is_nondecreasing_in_d0_on_a_coupled_realization() {
        let p = params(4.0, SnrMode::High);
        let opts = SimOptions::default();
        for seed in 0..20 {
            let mut prev = 0.0;
            for i in 1..=10 {
                let d0 = 0.4 * i as f64;
                let out = coupled_trial_suite(&p, d0, &opts, seed, 3).unwrap();
                assert!(out.high.s3_radius >= prev);
                prev = out.high.s3_radius;
            }
        }
    }
}
