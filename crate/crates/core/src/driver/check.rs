use serde::Serialize;

use crate::bundles::{hamiltonian_connection_check, integrality_defect};
use crate::hamilton::{
    conservation_residual, el_hamilton_residual, hamilton_lagrangian_residuals, hamiltonian_connection,
    hamiltonian_form, inverse_legendre_residual, liouville_form, polysymplectic_form, HamiltonError,
};
use crate::model::ModelFile;
use crate::symexpr::Expr;

use super::{derive, DriverError, VERSION};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckItem {
    pub name: String,
    /// `None` when the check does not apply to this model.
    pub passed: Option<bool>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub model: String,
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed != Some(false))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# homfield {VERSION} check\nmodel: {}\n", self.model);
        for i in &self.items {
            let status = match i.passed {
                Some(true) => "pass",
                Some(false) => "FAIL",
                None => "skip",
            };
            out.push_str(&format!("{status} {}: {}\n", i.name, i.detail));
        }
        out.push_str(&format!("result: {}\n", if self.passed() { "pass" } else { "FAIL" }));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("json") + "\n"
    }
}

fn residuals(name: &str, r: &[Expr]) -> CheckItem {
    let bad: Vec<String> = r.iter().filter(|e| !e.is_literal_zero()).map(ToString::to_string).collect();
    CheckItem {
        name: name.to_string(),
        passed: Some(bad.is_empty()),
        detail: if bad.is_empty() { "0".to_string() } else { bad.join("; ") },
    }
}

fn skipped(name: &str, why: impl Into<String>) -> CheckItem {
    CheckItem { name: name.to_string(), passed: None, detail: why.into() }
}

fn flag(name: &str, ok: bool) -> CheckItem {
    let detail = if ok { "holds" } else { "does not hold" };
    CheckItem { name: name.to_string(), passed: Some(ok), detail: detail.to_string() }
}

/// `check`: the symbolic identities the derivation should satisfy.
pub fn cmd_check(model: &ModelFile) -> Result<CheckReport, DriverError> {
    let d = derive(model)?;
    let sys = &d.system;
    let mut items = Vec::new();

    if sys.has_spatial_jets() {
        items.push(skipped("energy balance dH/dtau = partial_tau H", "holds only up to a spatial divergence"));
    } else {
        items.push(residuals("energy balance dH/dtau = partial_tau H", &[conservation_residual(sys)]));
    }

    let theta = liouville_form(sys);
    let omega = polysymplectic_form(sys);
    items.push(flag("d(liouville form) = polysymplectic form", theta.exterior_derivative().equals(&omega)));
    items.push(flag("polysymplectic form is closed", omega.exterior_derivative().is_zero()));

    if sys.has_spatial_jets() {
        items.push(skipped("gamma_H contracted with Omega = dH", "Hamiltonian depends on spatial jets"));
        items.push(skipped("Hamilton equations from L_H = p dy/dtau - H", "Hamiltonian depends on spatial jets"));
    } else {
        let g = hamiltonian_connection(sys);
        let dh = hamiltonian_form(sys).exterior_derivative();
        let ok = g.contract(sys.space(), &omega).equals(&dh) && hamiltonian_connection_check(sys.space(), &g, &omega);
        items.push(flag("gamma_H contracted with Omega = dH", ok));
        items.push(residuals("Hamilton equations from L_H = p dy/dtau - H", &hamilton_lagrangian_residuals(sys)?));
    }

    match &d.lagrangian {
        Some(lm) => {
            let inv = inverse_legendre_residual(sys).unwrap_or_default();
            items.push(residuals("inverse Legendre map", &inv));
            match el_hamilton_residual(lm, sys) {
                Ok(r) => items.push(residuals("Euler-Lagrange on Hamilton solutions", &r)),
                Err(HamiltonError::Unsupported(why)) => items.push(skipped("Euler-Lagrange on Hamilton solutions", why)),
                Err(e) => return Err(e.into()),
            }
        }
        None => {
            items.push(skipped("inverse Legendre map", "model is given by its Hamiltonian"));
            items.push(skipped("Euler-Lagrange on Hamilton solutions", "model is given by its Hamiltonian"));
        }
    }

    let space = sys.space();
    let gamma = model.gamma_connection(space).map_err(|e| DriverError::Derivation(e.to_string()))?;
    match (&model.gauge, &gamma) {
        (Some((_, h)), Some(g)) => {
            let defect = integrality_defect(space, g, h);
            items.push(residuals("gauge section is integral for the declared connection", &defect));
        }
        _ => items.push(skipped("gauge section is integral for the declared connection", "needs a gauge and a connection")),
    }

    Ok(CheckReport { model: model.name.clone(), items })
}
