//! The commands behind the `homfield` binary. Each returns its output as
//! strings so that the binary only does argument parsing and file I/O.

mod check;
mod run;

pub use check::{cmd_check, CheckItem, CheckReport};
pub use run::{
    cmd_gravity, cmd_simulate, cmd_sweep, parse_assignments, GravityOptions, GravityOutput, RunOptions,
    SimulationOutput,
};

use crate::evolve::EvolveError;
use crate::gravity::GravityError;
use crate::hamilton::{legendre, restrict_to_gauge, DerivationReport, GaugeReduction, HamiltonError, HamiltonianSystem, LagrangianModel};
use crate::jetcalc::JetError;
use crate::model::{parse_model, Dynamics, ModelFile};
use crate::symexpr::{Env, ParseError};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum DriverError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error at {}:{}: {}", .0.line, .0.col, .0.kind)]
    Parse(ParseError),
    #[error("derivation error: {0}")]
    Derivation(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl DriverError {
    pub fn exit_code(&self) -> i32 {
        match self {
            DriverError::Usage(_) => 1,
            DriverError::Parse(_) => 2,
            DriverError::Derivation(_) => 3,
            DriverError::Numeric(_) => 4,
        }
    }
}

impl From<ParseError> for DriverError {
    fn from(e: ParseError) -> Self {
        DriverError::Parse(e)
    }
}

impl From<HamiltonError> for DriverError {
    fn from(e: HamiltonError) -> Self {
        DriverError::Derivation(e.to_string())
    }
}

impl From<JetError> for DriverError {
    fn from(e: JetError) -> Self {
        DriverError::Derivation(e.to_string())
    }
}

impl From<EvolveError> for DriverError {
    fn from(e: EvolveError) -> Self {
        match e {
            EvolveError::UnsupportedSystem(_) => DriverError::Derivation(e.to_string()),
            EvolveError::InvalidStep(_) | EvolveError::InvalidSpan(..) | EvolveError::DimensionMismatch { .. } => {
                DriverError::Usage(e.to_string())
            }
            _ => DriverError::Numeric(e.to_string()),
        }
    }
}

impl From<GravityError> for DriverError {
    fn from(e: GravityError) -> Self {
        match e {
            GravityError::UnknownAnsatz(_) => DriverError::Usage(e.to_string()),
            GravityError::Evolve(inner) => inner.into(),
            _ => DriverError::Derivation(e.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

/// A parsed model taken through the Legendre map and, if it declares a
/// gauge, the reduction to that section.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub model: ModelFile,
    pub lagrangian: Option<LagrangianModel>,
    pub system: HamiltonianSystem,
    pub gauge: Option<GaugeReduction>,
    pub params: Env,
}

pub fn load_model(text: &str) -> Result<ModelFile, DriverError> {
    Ok(parse_model(text)?)
}

pub fn derive(model: &ModelFile) -> Result<Derivation, DriverError> {
    let space = model.space()?;
    let (lagrangian, system) = match &model.dynamics {
        Dynamics::Lagrangian { expr, .. } => {
            let lm = LagrangianModel::new(space.clone(), expr.clone())?;
            let sys = legendre(&lm)?;
            (Some(lm), sys)
        }
        Dynamics::Hamiltonian { expr, .. } => (None, HamiltonianSystem::new(space.clone(), expr.clone())?),
    };
    let gamma = model.gamma_connection(&space).map_err(|e| DriverError::Derivation(e.to_string()))?;
    let gauge = match &model.gauge {
        Some((_, h)) => Some(restrict_to_gauge(&system, h, gamma.as_ref())?),
        None => None,
    };
    let params = model.param_env(&space);
    Ok(Derivation { model: model.clone(), lagrangian, system, gauge, params })
}

/// `derive`: momenta, `𝓗`, Hamilton equations, the energy monitor and, when
/// a gauge is declared, the reduced equations.
pub fn cmd_derive(model: &ModelFile, format: ReportFormat) -> Result<String, DriverError> {
    let d = derive(model)?;
    let report = DerivationReport::new(&model.name, &d.system, d.gauge.as_ref());
    Ok(match format {
        ReportFormat::Text => format!("# homfield {VERSION} derive\n{}", report.to_text()),
        ReportFormat::Json => report.to_json() + "\n",
    })
}
