//! Shared oracles for the integration and acceptance suites.
//!
//! Everything here is deliberately independent of the library's own
//! numerics: the integrator, series and sampling helpers below never call
//! the code paths they are used to check.

#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use secrecy_sg::pointprocess::{
    estimate_origin_cell_area, sample_ppp, window_radius_for, DiskWindow,
};
use secrecy_sg::Result;

/// Adaptive Simpson quadrature to absolute tolerance `tol` on [a, b].
pub fn integrate(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), fm)
    }
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (left, flm) = simpson(f, a, fa, m, fm);
        let (right, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, flm, left, tol / 2.0, depth - 1)
                + recurse(f, m, fm, b, fb, frm, right, tol / 2.0, depth - 1)
        }
    }
    // Pre-split so a peaked integrand cannot fool the first coarse
    // estimate into agreeing with zero.
    const PANELS: usize = 64;
    let h = (b - a) / PANELS as f64;
    let mut total = 0.0;
    for i in 0..PANELS {
        let (pa, pb) = (a + i as f64 * h, a + (i + 1) as f64 * h);
        let (fa, fb) = (f(pa), f(pb));
        let (whole, fm) = simpson(f, pa, fa, pb, fb);
        total += recurse(f, pa, fa, pb, fb, fm, whole, tol / PANELS as f64, 40);
    }
    total
}

/// Integrate a CCDF over all thresholds. The expressions at hand decay at
/// least like 2^{-2t/alpha}, so the tail past the cutoff is below 1e-13.
pub fn integrate_ccdf_over_thresholds(f: &impl Fn(f64) -> f64, alpha: f64) -> f64 {
    let upper = 25.0 * alpha;
    integrate(f, 0.0, upper, 1e-10)
}

/// Euler's constant as the limit of H_n - ln n, accelerated by the
/// Euler-Maclaurin correction so the truncation error is O(n^{-4}).
pub fn euler_gamma_limit_oracle(n: u64) -> f64 {
    let mut harmonic = 0.0;
    for k in 1..=n {
        harmonic += 1.0 / k as f64;
    }
    let nf = n as f64;
    harmonic - nf.ln() - 0.5 / nf + 1.0 / (12.0 * nf * nf)
}

/// The exponential-integral series E1(x) = -gamma - ln x + sum_{k>=1}
/// (-1)^{k+1} x^k / (k k!), summed term by term with explicit factorials.
/// Trustworthy for 0 < x <= 5 or so, where cancellation stays mild.
pub fn e1_series_oracle(x: f64) -> f64 {
    let gamma = euler_gamma_limit_oracle(20_000);
    let mut total = -gamma - x.ln();
    let mut power = 1.0;
    let mut factorial = 1.0;
    for k in 1..=120 {
        let kf = k as f64;
        power *= x;
        factorial *= kf;
        let term = if k % 2 == 1 { 1.0 } else { -1.0 } * power / (kf * factorial);
        total += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    total
}

/// Gamma function by quadrature of its integral definition.
pub fn gamma_quadrature_oracle(q: f64) -> f64 {
    integrate(&|t: f64| t.powf(q - 1.0) * (-t).exp(), 1e-12, 80.0, 1e-12)
}

/// Draw hit-or-miss origin-cell-area estimates under eavesdropper density
/// `lambda_e`, one independent stream per cell.
///
/// The probe window takes a 25% margin over the escape radius; the
/// eavesdropper window doubles the probe radius, which covers every point
/// able to exclude a probe.
pub fn sample_cell_areas_oracle(
    lambda_e: f64,
    n_cells: u64,
    n_probes: u64,
    seed: u64,
) -> Result<Vec<f64>> {
    let probe_window = DiskWindow::new(1.25 * window_radius_for(1e-6, lambda_e)?)?;
    let eve_window = DiskWindow::new(2.0 * probe_window.radius())?;
    let mut areas = Vec::with_capacity(n_cells as usize);
    for i in 0..n_cells {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0x9E37_79B9_7F4A_7C15u64.wrapping_mul(i + 1)));
        let eves = sample_ppp(lambda_e, eve_window, &mut rng)?;
        areas.push(estimate_origin_cell_area(
            &eves,
            probe_window,
            n_probes,
            &mut rng,
        )?);
    }
    Ok(areas)
}

/// One-sample KS statistic against an analytic CDF (test-side copy so the
/// acceptance checks do not depend on the library's statistics module).
pub fn ks_statistic_oracle(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        sup = sup
            .max((i as f64 / n - f).abs())
            .max(((i + 1) as f64 / n - f).abs());
    }
    sup
}
