//! Full nonlinear dynamics: the vector field, Euler sweeps, Newton refinement
//! and the comparison of refined branches against predictions.

mod euler;
mod field;
pub mod fit;
mod newton;
mod poly;
mod verify;

pub use euler::{euler_sweep, integrate, linear_grid, SweepConfig, SweepPoint};
pub use field::{Frozen, VectorField};
pub use fit::{coefficient_at_exponent, fit_power_law, FitError, PowerLawFit};
pub use newton::{newton_refine, NewtonError};
pub use poly::{jet_of, ResponsePolynomial, Term};
pub use verify::{verify, BranchCheck, BranchStatus, CellCheck, Thresholds, VerificationReport};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("malformed response: {0}")]
    Malformed(String),
    #[error("response has {got} inputs, network has {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("invalid sweep configuration: {0}")]
    Config(String),
}

