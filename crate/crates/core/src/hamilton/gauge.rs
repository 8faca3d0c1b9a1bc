use std::fmt;

use crate::bundles::{integrality_defect, ConnectionGamma};
use crate::jetcalc::Direction;
use crate::symexpr::{bind, differentiate, simplify, substitute, Expr};

use super::{HamiltonError, HamiltonianSystem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedEquation {
    pub lhs: String,
    pub rhs: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GaugeWarning {
    /// `h` is not an integral section of the supplied `Γ`; the composite
    /// connection does not reduce to the pull-back connection.
    NonIntegralSection { defect: Vec<Expr> },
}

impl fmt::Display for GaugeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaugeWarning::NonIntegralSection { defect } => {
                write!(f, "gauge section is not integral for the connection (defect")?;
                for d in defect {
                    write!(f, " {d}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// The system restricted to `τ = h(x)`.
#[derive(Clone, Debug)]
pub struct GaugeReduction {
    pub section: Expr,
    /// Base direction the reduced equations evolve along; `None` when `h` is
    /// constant and `τ` is frozen.
    pub direction: Option<usize>,
    /// `𝓗(x, h(x), y, p̄)`.
    pub hamiltonian: Expr,
    pub equations: Vec<ReducedEquation>,
    pub warnings: Vec<GaugeWarning>,
}

impl GaugeReduction {
    pub fn to_text(&self) -> String {
        let mut out = format!("gauge: tau = {}\n", self.section);
        out.push_str(&format!("reduced hamiltonian: {}\n", self.hamiltonian));
        for e in &self.equations {
            out.push_str(&format!("reduced: {} = {}\n", e.lhs, e.rhs));
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}

/// Substitutes `τ = h(x)` in the formal Hamilton equations.
///
/// Supported sections are constants and functions of a single base
/// coordinate `x^k`. In the latter case the restricted fields
/// `φ(x) = y(x, h(x))` satisfy `∂_k φ = ∂_k h · (rhs)|_{τ = h}`; with
/// `h = x^k` these are the Hamilton–De Donder equations along `x^k`.
pub fn restrict_to_gauge(
    sys: &HamiltonianSystem,
    h: &Expr,
    gamma: Option<&ConnectionGamma>,
) -> Result<GaugeReduction, HamiltonError> {
    let space = sys.space();
    let h = simplify(h);
    let mut coords = Vec::new();
    for s in h.symbols() {
        match space.direction_of(&s) {
            Some(Direction::Base(k)) => coords.push(k),
            Some(Direction::Tau) => {
                return Err(HamiltonError::UnsupportedGauge(format!("h = {h} depends on {}", s.name())))
            }
            None if s.is_parameter() => {}
            None => return Err(HamiltonError::UnsupportedGauge(format!("h = {h} depends on {}", s.name()))),
        }
    }
    if coords.len() > 1 {
        return Err(HamiltonError::UnsupportedGauge(format!("h = {h} depends on more than one base coordinate")));
    }
    let direction = coords.first().copied();
    if let Some(k) = direction {
        let along_k =
            sys.hamiltonian().symbols().iter().any(|s| space.jet_parts(s).is_some_and(|(_, a)| a.spatial()[k] > 0));
        if along_k {
            return Err(HamiltonError::UnsupportedGauge(format!(
                "𝓗 depends on derivatives along {}, the gauge direction",
                space.base(k).name()
            )));
        }
    }
    let at_h = bind(space.tau(), h.clone());
    let factor = match direction {
        Some(k) => differentiate(&h, space.base(k)),
        None => Expr::one(),
    };
    let along = |name: &str| match direction {
        Some(k) => format!("d({name}, {})", space.base(k).name()),
        None => format!("d({name}, {})", space.tau().name()),
    };
    let mut equations = Vec::with_capacity(2 * space.m());
    for i in 0..space.m() {
        let rhs = simplify(&(factor.clone() * substitute(sys.field_rate(i), &at_h)));
        equations.push(ReducedEquation { lhs: along(space.field(i).name()), rhs });
    }
    for i in 0..space.m() {
        let rhs = simplify(&(factor.clone() * substitute(sys.momentum_rate(i), &at_h)));
        equations.push(ReducedEquation { lhs: along(space.momentum(i).name()), rhs });
    }
    let mut warnings = Vec::new();
    if let Some(g) = gamma {
        let defect = integrality_defect(space, g, &h);
        if defect.iter().any(|d| !d.is_literal_zero()) {
            warnings.push(GaugeWarning::NonIntegralSection { defect });
        }
    }
    Ok(GaugeReduction { hamiltonian: substitute(sys.hamiltonian(), &at_h), section: h, direction, equations, warnings })
}
