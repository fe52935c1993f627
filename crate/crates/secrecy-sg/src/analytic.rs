//! Closed-form secrecy-rate distributions and means.
//!
//! Every expression here is a pure function of the network parameters. Rates
//! are in bits per channel use; the CCDF value at a threshold is the "secure
//! coverage probability". Scenario naming:
//!
//! - `s1`: full eavesdropper location information, nearest BS serves (exact).
//! - `s2`: full information, best BS serves (upper/lower bounds plus a
//!   Voronoi cell-area bound that is exact at threshold zero).
//! - `s3_cell`: intracell information only, nearest BS serves (lower bound).
//! - `s3_radius`: information inside a detection radius `d0` around the
//!   serving BS, nearest BS serves (exact).

use std::f64::consts::{LN_2, PI};

use rand::Rng;

use crate::specfun::{self, CellAreaLaw};
use crate::{Error, Result};

/// How receiver SNR enters the rate expressions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SnrMode {
    /// Pure path-loss limit: the secrecy rate reduces to α·log2 of a
    /// distance ratio.
    High,
    /// Finite linear SNR, defined as the received SNR from the serving BS at
    /// unit distance.
    Finite(f64),
}

impl SnrMode {
    /// Convert a dB figure to the linear mode.
    pub fn from_db(db: f64) -> Self {
        SnrMode::Finite(10.0_f64.powf(db / 10.0))
    }
}

/// Densities, path-loss exponent and SNR model of the network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkParams {
    lambda_bs: f64,
    lambda_e: f64,
    alpha: f64,
    snr: SnrMode,
}

impl NetworkParams {
    pub fn new(lambda_bs: f64, lambda_e: f64, alpha: f64, snr: SnrMode) -> Result<Self> {
        if !(lambda_bs > 0.0 && lambda_bs.is_finite()) {
            return Err(Error::Domain(format!(
                "base-station density must be positive, got {lambda_bs}"
            )));
        }
        if !(lambda_e > 0.0 && lambda_e.is_finite()) {
            return Err(Error::Domain(format!(
                "eavesdropper density must be positive, got {lambda_e}"
            )));
        }
        if !(alpha > 2.0 && alpha.is_finite()) {
            return Err(Error::Domain(format!(
                "path-loss exponent must exceed 2, got {alpha}"
            )));
        }
        if let SnrMode::Finite(s) = snr {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::Domain(format!(
                    "finite SNR must be a positive linear ratio, got {s}"
                )));
            }
        }
        Ok(Self {
            lambda_bs,
            lambda_e,
            alpha,
            snr,
        })
    }

    pub fn lambda_bs(&self) -> f64 {
        self.lambda_bs
    }

    pub fn lambda_e(&self) -> f64 {
        self.lambda_e
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn snr(&self) -> SnrMode {
        self.snr
    }

    /// Same network with a different SNR model.
    pub fn with_snr(mut self, snr: SnrMode) -> Result<Self> {
        if let SnrMode::Finite(s) = snr {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::Domain(format!(
                    "finite SNR must be a positive linear ratio, got {s}"
                )));
            }
        }
        self.snr = snr;
        Ok(self)
    }
}

/// A secrecy-rate threshold R0 ≥ 0 (bits per channel use) and the derived
/// power ratio 2^{R0}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    r0: f64,
}

impl Threshold {
    pub fn new(r0: f64) -> Result<Self> {
        if !(r0 >= 0.0 && r0.is_finite()) {
            return Err(Error::Domain(format!(
                "rate threshold must satisfy r0 >= 0, got {r0}"
            )));
        }
        Ok(Self { r0 })
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    /// β = 2^{R0} ≥ 1.
    pub fn beta(&self) -> f64 {
        self.r0.exp2()
    }
}

/// α / (2 ln 2): the prefactor shared by all mean-rate expressions.
fn rate_prefactor(alpha: f64) -> f64 {
    alpha / (2.0 * LN_2)
}

/// 2^{2 R0 / α}, the squared distance-shrink factor at threshold R0.
fn beta_two_over_alpha(p: &NetworkParams, t: &Threshold) -> f64 {
    (2.0 * t.r0() / p.alpha).exp2()
}

/// Nearest BS, full information: P(rate > R0) = 1 / (1 + (λe/λbs)·2^{2R0/α}).
pub fn ccdf_s1(p: &NetworkParams, t: &Threshold) -> f64 {
    1.0 / (1.0 + p.lambda_e / p.lambda_bs * beta_two_over_alpha(p, t))
}

/// Nearest BS, full information: mean rate (α/(2 ln 2))·ln((λbs+λe)/λe).
pub fn mean_s1(p: &NetworkParams) -> f64 {
    rate_prefactor(p.alpha) * (p.lambda_bs / p.lambda_e).ln_1p()
}

/// Best BS: CCDF upper bound 1 − exp(−λbs/(λe·2^{2R0/α})).
pub fn ccdf_s2_upper_pgfl(p: &NetworkParams, t: &Threshold) -> f64 {
    -(-p.lambda_bs / (p.lambda_e * beta_two_over_alpha(p, t))).exp_m1()
}

/// Best BS: CCDF lower bound; the nearest BS is always an admissible choice,
/// so this is `ccdf_s1` verbatim.
pub fn ccdf_s2_lower(p: &NetworkParams, t: &Threshold) -> f64 {
    ccdf_s1(p, t)
}

/// Best BS: cell-area CCDF upper bound
/// 1 − (b/(b + s))^q with s = 4/(1 + 2^{R0/α})² · λbs/λe.
///
/// Exact at R0 = 0, where it reduces to the secrecy coverage probability.
pub fn ccdf_s2_upper_voronoi(p: &NetworkParams, t: &Threshold, law: &CellAreaLaw) -> f64 {
    let s = voronoi_shrink_argument(p, t);
    -(law.shape() * (law.rate() / (law.rate() + s)).ln()).exp_m1()
}

/// The Laplace argument s = 4/(1 + 2^{R0/α})² · λbs/λe of the cell-area bound.
fn voronoi_shrink_argument(p: &NetworkParams, t: &Threshold) -> f64 {
    let g = 1.0 + (t.r0() / p.alpha).exp2();
    4.0 / (g * g) * p.lambda_bs / p.lambda_e
}

/// Best BS: the cell-area bound sampled instead of fitted — a Monte Carlo
/// average of exp(−s·V) over draws of V quantifies the gamma-fit error.
pub fn ccdf_s2_upper_voronoi_sampled<R: Rng + ?Sized>(
    p: &NetworkParams,
    t: &Threshold,
    law: &CellAreaLaw,
    n_samples: u64,
    rng: &mut R,
) -> Result<f64> {
    if n_samples == 0 {
        return Err(Error::Argument("need at least one cell-area sample".into()));
    }
    let s = voronoi_shrink_argument(p, t);
    let mut acc = 0.0;
    for _ in 0..n_samples {
        acc += (-s * specfun::sample_cell_area(law, rng)).exp();
    }
    Ok(1.0 - acc / n_samples as f64)
}

/// Best BS: exact secure coverage probability at threshold zero, the R0 = 0
/// point of the cell-area bound.
pub fn coverage_s2_exact_r0zero(p: &NetworkParams, law: &CellAreaLaw) -> f64 {
    ccdf_s2_upper_voronoi(p, &Threshold { r0: 0.0 }, law)
}

/// Best BS: mean-rate upper bound (α/(2 ln 2))·[γ + ln(λbs/λe) + E1(λbs/λe)].
pub fn mean_s2_upper(p: &NetworkParams) -> f64 {
    let x = p.lambda_bs / p.lambda_e;
    let e1 = specfun::exp_integral_e1(x).expect("density ratio is positive");
    rate_prefactor(p.alpha) * (specfun::EULER_GAMMA + x.ln() + e1)
}

/// Best BS: mean-rate lower bound, `mean_s1` verbatim.
pub fn mean_s2_lower(p: &NetworkParams) -> f64 {
    mean_s1(p)
}

/// Best BS: the cell-area CCDF bound integrated numerically over thresholds.
/// Complements `mean_s2_upper`; accurate for small rates, loose for large.
pub fn mean_s2_upper_voronoi(p: &NetworkParams, law: &CellAreaLaw) -> f64 {
    integrate_ccdf(|r0| ccdf_s2_upper_voronoi(p, &Threshold { r0 }, law), p.alpha)
}

/// Intracell information only, nearest BS: CCDF lower bound
/// 1 / (1 + (λe/λbs + 4)·2^{2R0/α}).
pub fn ccdf_s3_cell_lower(p: &NetworkParams, t: &Threshold) -> f64 {
    1.0 / (1.0 + (p.lambda_e / p.lambda_bs + 4.0) * beta_two_over_alpha(p, t))
}

/// Intracell information only: mean-rate lower bound
/// (α/(2 ln 2))·ln((5λbs + λe)/(4λbs + λe)).
pub fn mean_s3_cell_lower(p: &NetworkParams) -> f64 {
    rate_prefactor(p.alpha)
        * ((5.0 * p.lambda_bs + p.lambda_e) / (4.0 * p.lambda_bs + p.lambda_e)).ln()
}

/// Detection radius d0, nearest BS: exact CCDF
/// (1 − exp[−π(λe + λbs·2^{−2R0/α})·d0²]) · ccdf_s1.
pub fn ccdf_s3_radius(p: &NetworkParams, t: &Threshold, d0: f64) -> Result<f64> {
    if !(d0 >= 0.0) {
        return Err(Error::Domain(format!(
            "detection radius must satisfy d0 >= 0, got {d0}"
        )));
    }
    let shrunk_bs = p.lambda_bs * (-2.0 * t.r0() / p.alpha).exp2();
    let reach = -(-PI * (p.lambda_e + shrunk_bs) * d0 * d0).exp_m1();
    Ok(reach * ccdf_s1(p, t))
}

/// Detection radius d0 > 0, nearest BS: exact mean rate
/// mean_s1 − (α/(2 ln 2))·[E1(πλe d0²) − E1(π(λe+λbs) d0²)].
pub fn mean_s3_radius(p: &NetworkParams, d0: f64) -> Result<f64> {
    if !(d0 > 0.0) {
        return Err(Error::Domain(format!(
            "the mean-rate expression needs d0 > 0, got {d0}"
        )));
    }
    let a = specfun::exp_integral_e1(PI * p.lambda_e * d0 * d0)?;
    let b = specfun::exp_integral_e1(PI * (p.lambda_e + p.lambda_bs) * d0 * d0)?;
    Ok(mean_s1(p) - rate_prefactor(p.alpha) * (a - b))
}

/// Rayleigh-type density 2πλbs·r·exp(−πλbs r²) of the distance to the
/// nearest BS.
pub fn ru_pdf(p: &NetworkParams, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!(
            "distance must satisfy r >= 0, got {r}"
        )));
    }
    let a = PI * p.lambda_bs;
    Ok(2.0 * a * r * (-a * r * r).exp())
}

/// Survival P(D_min > r) = exp(−4πλbs r²) of the generator-to-cell-boundary
/// distance.
pub fn dmin_survival(p: &NetworkParams, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!(
            "distance must satisfy r >= 0, got {r}"
        )));
    }
    Ok((-4.0 * PI * p.lambda_bs * r * r).exp())
}

/// Density 8πλbs·r·exp(−4πλbs r²) companion to [`dmin_survival`].
pub fn dmin_pdf(p: &NetworkParams, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!(
            "distance must satisfy r >= 0, got {r}"
        )));
    }
    let a = 4.0 * PI * p.lambda_bs;
    Ok(2.0 * a * r * (-a * r * r).exp())
}

/// Composite-Simpson integral of a CCDF over thresholds, truncated where the
/// exponential decay in R0 makes the tail negligible at f64 scale.
fn integrate_ccdf(ccdf: impl Fn(f64) -> f64, alpha: f64) -> f64 {
    // All CCDFs here decay at least like 2^{-2R0/α}; past this point the
    // remaining tail is below 1e-13.
    let upper = alpha / 2.0 * 45.0;
    let n = 20_000;
    let h = upper / n as f64;
    let mut acc = ccdf(0.0) + ccdf(upper);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * ccdf(i as f64 * h);
    }
    acc * h / 3.0
}
