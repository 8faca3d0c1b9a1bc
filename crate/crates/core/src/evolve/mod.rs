//! Fixed-step integration of the formal Hamilton equations in `τ`, with
//! energy monitoring.

mod integrate;
mod system;
mod trajectory;

pub use integrate::{integrate, integrate_with_stride, Method};
pub use system::OdeSystem;
pub use trajectory::{monitor_energy, DriftReport, Trajectory};

use crate::symexpr::SymbolError;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum EvolveError {
    #[error("step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("empty or reversed interval [{0}, {1}]")]
    InvalidSpan(f64, f64),
    #[error("expected {expected} initial values, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state became non-finite at tau = {0}")]
    NonFiniteState(f64),
    #[error("implicit midpoint iteration did not converge at tau = {0}")]
    FixedPointDivergence(f64),
    #[error("cannot build an ODE system: {0}")]
    UnsupportedSystem(String),
    #[error(transparent)]
    Evaluation(#[from] SymbolError),
}
