//! Goodness-of-fit helpers for the validation suites.
//!
//! Small, self-contained implementations: a one-sample Kolmogorov–Smirnov
//! statistic against an analytic CDF, and the regularized incomplete gamma
//! function backing the gamma and chi-square CDFs the suites compare
//! against.

use crate::specfun::ln_gamma;
use crate::{Error, Result};

/// One-sample Kolmogorov–Smirnov statistic sup |F_n(x) − F(x)| of `samples`
/// against the CDF `cdf`. Samples need not be sorted.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Argument("KS statistic needs samples".into()));
    }
    if samples.iter().any(|v| v.is_nan()) {
        return Err(Error::Argument("KS statistic got NaN samples".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        sup = sup
            .max((i as f64 / n - f).abs())
            .max(((i + 1) as f64 / n - f).abs());
    }
    Ok(sup)
}

/// The 5%-level KS acceptance threshold 1.36/√n.
pub fn ks_threshold(n: usize) -> f64 {
    1.36 / (n as f64).sqrt()
}

/// Regularized lower incomplete gamma P(a, x) = γ(a, x)/Γ(a).
///
/// Series for x < a + 1, continued fraction otherwise (both to roughly f64
/// precision).
pub fn gamma_p(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || !(x >= 0.0) {
        return Err(Error::Domain(format!(
            "gamma_p needs a > 0 and x >= 0, got a={a}, x={x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x < a + 1.0 {
        Ok(gamma_p_series(a, x))
    } else {
        Ok(1.0 - gamma_q_continued_fraction(a, x))
    }
}

fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..500 {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * f64::EPSILON {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

fn gamma_q_continued_fraction(a: f64, x: f64) -> f64 {
    const FPMIN: f64 = f64::MIN_POSITIVE / f64::EPSILON;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=500 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() <= f64::EPSILON {
            break;
        }
    }
    h * (-x + a * x.ln() - ln_gamma(a)).exp()
}

/// CDF of a Gamma(shape, rate) variable at `x`.
pub fn gamma_cdf(shape: f64, rate: f64, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    gamma_p(shape, rate * x)
}

/// CDF of a chi-square variable with `df` degrees of freedom.
pub fn chi_square_cdf(df: f64, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    gamma_p(df / 2.0, x / 2.0)
}
