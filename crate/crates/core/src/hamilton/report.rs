use serde::Serialize;

use super::{conservation_residual, GaugeReduction, HamiltonianSystem};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Definition {
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaugeSection {
    pub section: String,
    pub hamiltonian: String,
    pub equations: Vec<Definition>,
    pub warnings: Vec<String>,
}

/// Printable summary of a derivation: momenta, `𝓗`, evolution equations and
/// the energy monitor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivationReport {
    pub model: String,
    pub fields: Vec<String>,
    pub lagrangian: Option<String>,
    pub momenta: Vec<Definition>,
    pub velocities: Vec<Definition>,
    pub hamiltonian: String,
    pub equations: Vec<Definition>,
    pub monitor: Definition,
    pub bracket_residual: String,
    pub gauge: Option<GaugeSection>,
}

fn def(lhs: impl Into<String>, rhs: impl ToString) -> Definition {
    Definition { lhs: lhs.into(), rhs: rhs.to_string() }
}

impl DerivationReport {
    pub fn new(model: &str, sys: &HamiltonianSystem, gauge: Option<&GaugeReduction>) -> Self {
        let s = sys.space();
        let (lagrangian, momenta, velocities) = match sys.legendre_data() {
            Some(d) => (
                Some(d.lagrangian.to_string()),
                (0..s.m()).map(|i| def(s.momentum(i).name(), &d.momenta[i])).collect(),
                (0..s.m()).map(|i| def(s.velocity(i).name(), &d.velocities[i])).collect(),
            ),
            None => (None, Vec::new(), Vec::new()),
        };
        let monitor = sys.monitor_equation();
        DerivationReport {
            model: model.to_string(),
            fields: s.fields().iter().map(|f| f.name().to_string()).collect(),
            lagrangian,
            momenta,
            velocities,
            hamiltonian: sys.hamiltonian().to_string(),
            equations: sys.equations().into_iter().map(|e| def(e.lhs, e.rhs)).collect(),
            monitor: def(monitor.lhs, monitor.rhs),
            bracket_residual: if sys.has_spatial_jets() {
                "n/a (field Hamiltonian: energy balance holds up to a spatial divergence)".to_string()
            } else {
                conservation_residual(sys).to_string()
            },
            gauge: gauge.map(|g| GaugeSection {
                section: g.section.to_string(),
                hamiltonian: g.hamiltonian.to_string(),
                equations: g.equations.iter().map(|e| def(e.lhs.clone(), &e.rhs)).collect(),
                warnings: g.warnings.iter().map(ToString::to_string).collect(),
            }),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("model: {}\n", self.model);
        out.push_str(&format!("fields: {}\n", self.fields.join(", ")));
        if let Some(l) = &self.lagrangian {
            out.push_str(&format!("lagrangian: {l}\n"));
        }
        for d in &self.momenta {
            out.push_str(&format!("momentum: {} = {}\n", d.lhs, d.rhs));
        }
        for d in &self.velocities {
            out.push_str(&format!("velocity: {} = {}\n", d.lhs, d.rhs));
        }
        out.push_str(&format!("hamiltonian: {}\n", self.hamiltonian));
        for d in &self.equations {
            out.push_str(&format!("equation: {} = {}\n", d.lhs, d.rhs));
        }
        out.push_str(&format!("monitor: {} = {}\n", self.monitor.lhs, self.monitor.rhs));
        out.push_str(&format!("bracket residual: {}\n", self.bracket_residual));
        if let Some(g) = &self.gauge {
            out.push_str(&format!("gauge: tau = {}\n", g.section));
            out.push_str(&format!("reduced hamiltonian: {}\n", g.hamiltonian));
            for d in &g.equations {
                out.push_str(&format!("reduced: {} = {}\n", d.lhs, d.rhs));
            }
            for w in &g.warnings {
                out.push_str(&format!("warning: {w}\n"));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
