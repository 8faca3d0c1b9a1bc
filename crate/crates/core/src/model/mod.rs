//! The model-file format: parser, validation and printer.
//!
//! ```text
//! model "oscillator"
//! base dim 1 coords (t)
//! line tau
//! field y
//! param k = 1
//! lagrangian L = 1/2*d(y, tau)^2 - 1/2*k*y^2
//! gauge h = t
//! connection theta {
//!   y_t = 0
//!   y_tau = 1
//! }
//! connection gamma {
//!   t = 1
//! }
//! ```

mod parser;
mod print;

pub use parser::parse_model;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::bundles::{BundleError, ConnectionGamma, ConnectionTheta};
use crate::jetcalc::{Direction, JetError, JetSpace};
use crate::symexpr::{Env, Expr};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub value: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dynamics {
    Lagrangian { name: String, expr: Expr },
    Hamiltonian { name: String, expr: Expr },
}

/// A `connection` block: either coefficients `A^i_c` keyed `<field>_<coord>`
/// for a connection on `Y → Θ`, or `Γ_λ` keyed by base coordinate names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConnectionBlock {
    Theta { name: String, entries: Vec<(String, Expr)> },
    Gamma { name: String, entries: Vec<(String, Expr)> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelFile {
    pub name: String,
    pub base: Vec<String>,
    pub line: String,
    pub fields: Vec<String>,
    pub params: Vec<Param>,
    pub dynamics: Dynamics,
    pub gauge: Option<(String, Expr)>,
    pub connections: Vec<ConnectionBlock>,
}

/// Jet order of the coordinate table built for a model.
pub const MODEL_JET_ORDER: u32 = 2;

impl ModelFile {
    /// The coordinate table declared by the model; symbols compare equal
    /// across calls.
    pub fn space(&self) -> Result<JetSpace, JetError> {
        let base: Vec<&str> = self.base.iter().map(String::as_str).collect();
        let fields: Vec<&str> = self.fields.iter().map(String::as_str).collect();
        let params: Vec<&str> = self.params.iter().map(|p| p.name.as_str()).collect();
        JetSpace::new(&base, &self.line, &fields, MODEL_JET_ORDER)?.with_parameters(&params)
    }

    /// Parameter values as floats, keyed by symbol.
    pub fn param_env(&self, space: &JetSpace) -> Env {
        self.params
            .iter()
            .filter_map(|p| Some((space.parameter(&p.name)?.clone(), p.value.to_f64().unwrap_or(f64::NAN))))
            .collect()
    }

    pub fn theta_connection(&self, space: &JetSpace) -> Result<Option<ConnectionTheta>, BundleError> {
        let Some(entries) = self.connections.iter().find_map(|c| match c {
            ConnectionBlock::Theta { entries, .. } => Some(entries),
            _ => None,
        }) else {
            return Ok(None);
        };
        let mut base = vec![vec![Expr::zero(); space.n()]; space.m()];
        let mut tau = vec![Expr::zero(); space.m()];
        for (key, e) in entries {
            let (i, dir) = split_theta_key(space, key).expect("keys are validated by the parser");
            match dir {
                Direction::Base(l) => base[i][l] = e.clone(),
                Direction::Tau => tau[i] = e.clone(),
            }
        }
        ConnectionTheta::new(space, base, tau).map(Some)
    }

    pub fn gamma_connection(&self, space: &JetSpace) -> Result<Option<ConnectionGamma>, BundleError> {
        let Some(entries) = self.connections.iter().find_map(|c| match c {
            ConnectionBlock::Gamma { entries, .. } => Some(entries),
            _ => None,
        }) else {
            return Ok(None);
        };
        let mut coeffs = vec![Expr::zero(); space.n()];
        for (key, e) in entries {
            let l = space.base_coords().iter().position(|b| b.name() == key).expect("validated key");
            coeffs[l] = e.clone();
        }
        ConnectionGamma::new(space, coeffs).map(Some)
    }
}

/// `<field>_<coord>` with `coord` a base coordinate or the line coordinate.
pub(crate) fn split_theta_key(space: &JetSpace, key: &str) -> Option<(usize, Direction)> {
    key.match_indices('_').find_map(|(at, _)| {
        let (field, coord) = (&key[..at], &key[at + 1..]);
        let i = space.field_index(field)?;
        if coord == space.tau().name() {
            return Some((i, Direction::Tau));
        }
        let l = space.base_coords().iter().position(|b| b.name() == coord)?;
        Some((i, Direction::Base(l)))
    })
}
