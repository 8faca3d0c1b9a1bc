use crate::bundles::PhaseConnection;
use crate::jetcalc::{DifferentialForm, Direction};
use crate::symexpr::{differentiate, simplify, Expr};

use super::HamiltonianSystem;

/// `ϑ_Y = p̄_i dy^i ∧ ω̂`, represented by its `∂_τ` component.
pub fn liouville_form(sys: &HamiltonianSystem) -> DifferentialForm {
    let s = sys.space();
    let vol = s.volume_form();
    let mut out = DifferentialForm::zero();
    for i in 0..s.m() {
        let term = DifferentialForm::monomial(Expr::sym(s.momentum(i)), &[s.field(i).clone()]).wedge(&vol);
        out = &out + &term;
    }
    out
}

/// `Ω_Y = dp̄_i ∧ dy^i ∧ ω̂`.
pub fn polysymplectic_form(sys: &HamiltonianSystem) -> DifferentialForm {
    let s = sys.space();
    let vol = s.volume_form();
    let mut out = DifferentialForm::zero();
    for i in 0..s.m() {
        let term = DifferentialForm::monomial(Expr::one(), &[s.momentum(i).clone(), s.field(i).clone()]).wedge(&vol);
        out = &out + &term;
    }
    out
}

/// `dp̄_i ∧ dy^i ∧ dτ`, the form `Ω_Y` with the base volume dropped.
pub fn polysymplectic_form_reduced(sys: &HamiltonianSystem) -> DifferentialForm {
    let s = sys.space();
    let mut out = DifferentialForm::zero();
    for i in 0..s.m() {
        let term =
            DifferentialForm::monomial(Expr::one(), &[s.momentum(i).clone(), s.field(i).clone(), s.tau().clone()]);
        out = &out + &term;
    }
    out
}

/// `H = p̄_i dy^i ∧ ω̂_τ − 𝓗 ω̂`, with `ω̂_τ = ∂_τ ⌋ ω̂`. For `n = 0` this is
/// `p̄ dy − 𝓗 dτ`.
pub fn hamiltonian_form(sys: &HamiltonianSystem) -> DifferentialForm {
    let s = sys.space();
    let vol_tau = s.volume_form_contracted(Direction::Tau);
    let mut out = s.volume_form().scale(&-sys.hamiltonian().clone());
    for i in 0..s.m() {
        let term = DifferentialForm::monomial(Expr::sym(s.momentum(i)), &[s.field(i).clone()]).wedge(&vol_tau);
        out = &out + &term;
    }
    out
}

/// `γ_H`: `ẏ^i = ∂̄^i𝓗`, `ṗ̄_i = −∂_i𝓗` (point derivatives).
pub fn hamiltonian_connection(sys: &HamiltonianSystem) -> PhaseConnection {
    let s = sys.space();
    let h = sys.hamiltonian();
    PhaseConnection {
        field_rates: s.momenta().iter().map(|p| differentiate(h, p)).collect(),
        momentum_rates: s.fields().iter().map(|y| simplify(&-differentiate(h, y))).collect(),
    }
}
