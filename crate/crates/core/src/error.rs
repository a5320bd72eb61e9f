use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {value} is outside the domain of {what}")]
    Domain { what: &'static str, value: f64 },

    #[error("evaluation point lies within {distance:e} of a pole of {what}")]
    Pole { what: &'static str, distance: f64 },

    #[error("boundary data is incompatible: mean(phi) = {phi_mean}, mean(psi) = {psi_mean}")]
    IncompatibleBoundaryData { phi_mean: f64, psi_mean: f64 },

    #[error("quadrature error bound {bound:e} exceeds tolerance {tolerance:e}")]
    QuadratureResolution { bound: f64, tolerance: f64 },

    #[error("circuit sequence is not admissible: {0}")]
    NonMonotone(String),

    #[error("requested Monte Carlo work ({requested:e} steps) exceeds the cost cap ({cap:e})")]
    Budget { requested: f64, cap: f64 },

    #[error("PDE solution left [0, 1] at a = {a}, nu = {nu}: value {value}")]
    Instability { a: f64, nu: f64, value: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("lattice invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
