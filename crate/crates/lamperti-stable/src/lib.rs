//! Lévy processes whose jump measure has, in each direction ξ of a finitely
//! supported spherical measure σ, the radial density
//!
//! ```text
//!     g_f(r) = exp(r f(ξ)) * (exp(r) - 1)^-(α+1),    r > 0,  α ∈ (0, 2),
//! ```
//!
//! behaving like an α-stable measure near the origin and with exponentially
//! light tails. The crate provides:
//!
//! - closed-form characteristic and Laplace exponents with an independent
//!   quadrature oracle ([`exponents`]),
//! - distributional and path-property classification ([`properties`]),
//! - exact series simulation of paths together with the jump-reweighting
//!   density process ([`simulate`]),
//! - Monte Carlo verification of small-time stable, long-time Brownian,
//!   and time-average positivity limits ([`limits`]),
//! - derived objects: OU driver measures, parent subordinators, scale
//!   functions, and special subordinator families ([`associated`]).
//!
//! Everything is one-dimensional: the spherical measure charges the two
//! points ±1. Multidimensional input is rejected at parse time by the CLI.

pub mod associated;
pub mod checks;
pub mod exponents;
pub mod limits;
pub mod measure;
pub mod properties;
pub mod quad;
pub mod rng;
pub mod simulate;
pub mod specfun;

/// Numerical failure surfaced by quadrature or root finding.
#[derive(Debug, Clone, thiserror::Error)]
pub enum NumericalError {
    #[error("quadrature did not reach the requested tolerance: {0}")]
    QuadratureNoConvergence(String),
    #[error("root finding did not converge: {0}")]
    RootNoConvergence(String),
    #[error("characteristic function decays too slowly for the grid: {0}")]
    GridTooNarrow(String),
    #[error("series did not converge within the term budget: {0}")]
    SeriesNoConvergence(String),
}

/// Either kind of failure, for operations that validate and compute.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Numerical(#[from] NumericalError),
}

/// Invalid parameter combinations rejected before any computation.
#[derive(Debug, Clone, thiserror::Error)]
pub enum DomainError {
    #[error("stability index must lie in (0, 2), got {0}")]
    AlphaOutOfRange(f64),
    #[error("direction weights must be positive and finite, got {0}")]
    BadWeight(f64),
    #[error("tilt function must satisfy sup f < α + 1; got f = {f} with α = {alpha}")]
    TiltTooLarge { f: f64, alpha: f64 },
    #[error("at least one direction must carry positive mass")]
    EmptyMeasure,
    #[error("{0}")]
    Invalid(String),
}
