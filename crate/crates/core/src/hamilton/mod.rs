//! Homogeneous Hamiltonian formalism: Legendre map, formal Hamilton
//! equations, Liouville, polysymplectic and Hamiltonian forms, and the gauge
//! reduction to Hamilton–De Donder equations.

mod checks;
mod forms;
mod gauge;
mod legendre;
mod report;
mod system;

pub use checks::{conservation_residual, el_hamilton_residual, hamilton_lagrangian_residuals, inverse_legendre_residual};
pub use forms::{hamiltonian_connection, hamiltonian_form, liouville_form, polysymplectic_form, polysymplectic_form_reduced};
pub use gauge::{restrict_to_gauge, GaugeReduction, GaugeWarning, ReducedEquation};
pub(crate) use legendre::solve_linear;
pub use legendre::{legendre, LagrangianModel, LegendreData};
pub use report::DerivationReport;
pub use system::{Equation, HamiltonianSystem};

use crate::jetcalc::JetError;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HamiltonError {
    #[error("invalid Lagrangian: {0}")]
    InvalidLagrangian(String),
    #[error("invalid Hamiltonian: {0}")]
    InvalidHamiltonian(String),
    #[error("degenerate Legendre map: {0}")]
    DegenerateLegendre(String),
    #[error("Lagrangian is not quadratic in the velocities: {0}")]
    NonQuadratic(String),
    #[error("unsupported gauge section: {0}")]
    UnsupportedGauge(String),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Jet(#[from] JetError),
}
