//! Secrecy-rate statistics for Poisson cellular networks.
//!
//! Base stations and eavesdroppers are modeled as independent planar Poisson
//! point processes under pure power-law path loss. This crate evaluates the
//! closed-form distribution (CCDF) and mean of the secrecy rate achievable at
//! a typical user under four cooperation models — full eavesdropper location
//! information with nearest-BS or best-BS association, intracell-only
//! information, and a finite detection radius around the serving BS — and
//! validates every expression against a point-process Monte Carlo simulator.
//!
//! Modules:
//! - [`analytic`]: the closed-form CCDF/mean expressions and bounds.
//! - [`montecarlo`]: per-realization trials and deterministic parallel
//!   CCDF/mean estimation.
//! - [`pointprocess`]: Poisson sampling in disk windows and nearest-neighbor
//!   geometry.
//! - [`specfun`]: the exponential integral and the gamma cell-area law.
//! - [`stats`]: goodness-of-fit helpers used by the validation suites.
//! - [`cli`]: the `secrecy-sg` command-line front end.

pub mod analytic;
pub mod cli;
pub mod montecarlo;
pub mod pointprocess;
pub mod specfun;
pub mod stats;

/// Errors raised by library operations.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An input lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A structurally invalid argument (bad index, empty grid, ...).
    #[error("invalid argument: {0}")]
    Argument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use analytic::{NetworkParams, SnrMode, Threshold};
pub use montecarlo::{EmpiricalCcdf, ScenarioSpec, SimOptions, TrialOutcome};
pub use pointprocess::{DiskWindow, Point, PointSet};
pub use specfun::CellAreaLaw;
