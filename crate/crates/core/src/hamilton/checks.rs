//! Symbolic identities relating the Lagrangian and Hamiltonian pictures. Each
//! function returns residuals that simplify to zero when the identity holds.

use crate::jetcalc::{euler_lagrange, Direction, JetSpace};
use crate::symexpr::{differentiate, simplify, substitute, Bindings, Expr, Symbol};

use super::{HamiltonError, HamiltonianSystem, LagrangianModel};

/// `p̄_i ẏ^i − 𝓗 − L` and `∂̄^i𝓗 − ẏ^i`, both with `p̄ = ∂L/∂ẏ`.
pub fn inverse_legendre_residual(sys: &HamiltonianSystem) -> Option<Vec<Expr>> {
    let data = sys.legendre_data()?;
    let s = sys.space();
    let to_vel: Bindings = s.momenta().iter().cloned().zip(data.momenta.iter().cloned()).collect();
    let pv = Expr::sum((0..s.m()).map(|i| data.momenta[i].clone() * Expr::sym(&s.velocity(i))).collect());
    let mut out = vec![simplify(&(pv - substitute(sys.hamiltonian(), &to_vel) - data.lagrangian.clone()))];
    for i in 0..s.m() {
        out.push(simplify(&(substitute(sys.field_rate(i), &to_vel) - Expr::sym(&s.velocity(i)))));
    }
    Some(out)
}

/// `D_τ` along the flow of the point Hamilton equations.
fn flow_derivative(sys: &HamiltonianSystem, e: &Expr) -> Expr {
    let s = sys.space();
    let mut terms = vec![differentiate(e, s.tau())];
    for i in 0..s.m() {
        terms.push(differentiate(e, s.field(i)) * sys.field_rate(i));
        terms.push(differentiate(e, s.momentum(i)) * sys.momentum_rate(i));
    }
    simplify(&Expr::sum(terms))
}

/// The Euler–Lagrange expressions of `model` with `ẏ` and `ÿ` replaced using
/// the Hamilton equations of `sys`. Point Lagrangians only.
pub fn el_hamilton_residual(model: &LagrangianModel, sys: &HamiltonianSystem) -> Result<Vec<Expr>, HamiltonError> {
    if model.has_spatial_jets() {
        return Err(HamiltonError::Unsupported("spatial jets in the Lagrangian".to_string()));
    }
    let s = model.space();
    let mut on_shell = Bindings::new();
    for i in 0..s.m() {
        on_shell.insert(s.velocity(i), sys.field_rate(i).clone());
        on_shell.insert(s.jet_along(i, &[Direction::Tau, Direction::Tau]), flow_derivative(sys, sys.field_rate(i)));
    }
    let mut out = Vec::with_capacity(s.m());
    for i in 0..s.m() {
        let el = euler_lagrange(s, model.lagrangian(), i)?;
        out.push(substitute(&el, &on_shell));
    }
    Ok(out)
}

/// `d𝓗/dτ` along solutions minus `∂_τ𝓗`:
/// `∂_i𝓗 ∂̄^i𝓗 − ∂̄^i𝓗 ∂_i𝓗` for point Hamiltonians.
pub fn conservation_residual(sys: &HamiltonianSystem) -> Expr {
    let total = flow_derivative(sys, sys.hamiltonian());
    simplify(&(total - sys.monitor().clone()))
}

/// Euler–Lagrange expressions of `L_H = p̄_i ẏ^i − 𝓗`, with `(y, p̄)` both
/// treated as fields, evaluated on the Hamilton equations of `sys`.
pub fn hamilton_lagrangian_residuals(sys: &HamiltonianSystem) -> Result<Vec<Expr>, HamiltonError> {
    let s = sys.space();
    let m = s.m();
    let base: Vec<&str> = s.base_coords().iter().map(Symbol::name).collect();
    let names: Vec<&str> = s.fields().iter().chain(s.momenta()).map(Symbol::name).collect();
    let doubled = JetSpace::new(&base, s.tau().name(), &names, 2)?
        .with_parameters(&s.parameters().iter().map(Symbol::name).collect::<Vec<_>>())?;
    let mut map = Bindings::new();
    for sym in sys.hamiltonian().symbols().into_iter().chain(sys.momentum_rates().iter().flat_map(|r| r.symbols())) {
        if let Some((i, a)) = s.jet_parts(&sym) {
            map.insert(sym, Expr::sym(&doubled.jet(i, &a)));
        } else if let Some(i) = s.momenta().iter().position(|p| *p == sym) {
            map.insert(sym, Expr::sym(doubled.field(m + i)));
        }
    }
    let h = substitute(sys.hamiltonian(), &map);
    let lh = Expr::sum((0..m).map(|i| Expr::sym(doubled.field(m + i)) * Expr::sym(&doubled.velocity(i))).collect()) - h;
    let mut on_shell = Bindings::new();
    for i in 0..m {
        on_shell.insert(doubled.velocity(i), substitute(sys.field_rate(i), &map));
        on_shell.insert(doubled.velocity(m + i), substitute(sys.momentum_rate(i), &map));
    }
    let mut out = Vec::with_capacity(2 * m);
    for k in 0..2 * m {
        let el = euler_lagrange(&doubled, &lh, k)?;
        out.push(substitute(&el, &on_shell));
    }
    Ok(out)
}
