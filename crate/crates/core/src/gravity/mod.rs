//! Parametrized Hilbert–Einstein Lagrangian on diagonal metric ansätze, the
//! formal gravitational Hamiltonian and its conservation.

mod ansatz;
mod curvature;
mod energy;

pub use ansatz::MetricAnsatz;
pub use curvature::{christoffel, einstein_divergence, he_lagrangian, ricci, scalar_curvature, sqrt_abs_det, Christoffel};
pub use energy::{
    check_energy_conservation, formal_gravity_hamiltonian, initial_momenta, ConservationReport, GravityDerivation,
};

use crate::evolve::EvolveError;
use crate::hamilton::HamiltonError;
use crate::jetcalc::JetError;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum GravityError {
    #[error("metric component g_{0}{0} vanishes")]
    SingularMetric(usize),
    #[error("invalid ansatz: {0}")]
    InvalidAnsatz(String),
    #[error("unknown ansatz `{0}` (expected frw, bianchi1 or static)")]
    UnknownAnsatz(String),
    #[error("cannot reduce to a first-order Lagrangian: {0}")]
    NonReducible(String),
    #[error(transparent)]
    Hamilton(#[from] HamiltonError),
    #[error(transparent)]
    Evolve(#[from] EvolveError),
    #[error(transparent)]
    Jet(#[from] JetError),
}
