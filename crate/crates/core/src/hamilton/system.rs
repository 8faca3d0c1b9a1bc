use crate::jetcalc::{JetSpace, MultiIndex};
use crate::symexpr::{differentiate, simplify, Expr, Symbol};

use super::{HamiltonError, LegendreData};

/// One evolution equation `lhs = rhs`; `lhs` is the printed name of a
/// `τ`-derivative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub lhs: String,
    pub rhs: Expr,
}

/// `𝓗(x, τ, y, p̄)` with its formal Hamilton equations
/// `ẏ^i = ∂𝓗/∂p̄_i`, `ṗ̄_i = −∂𝓗/∂y^i` and the monitor `𝓗̇ = ∂_τ𝓗`.
///
/// If `𝓗` depends on spatial jets `y^i_α` the momentum equation uses the
/// variational derivative `ṗ̄_i = −Σ_α (−1)^{|α|} D_α ∂𝓗/∂y^i_α`.
#[derive(Clone, Debug)]
pub struct HamiltonianSystem {
    space: JetSpace,
    hamiltonian: Expr,
    field_rates: Vec<Expr>,
    momentum_rates: Vec<Expr>,
    monitor: Expr,
    legendre: Option<LegendreData>,
}

impl HamiltonianSystem {
    pub fn new(space: JetSpace, hamiltonian: Expr) -> Result<Self, HamiltonError> {
        Self::with_legendre(space, hamiltonian, None)
    }

    pub(crate) fn with_legendre(
        space: JetSpace,
        hamiltonian: Expr,
        legendre: Option<LegendreData>,
    ) -> Result<Self, HamiltonError> {
        let h = simplify(&hamiltonian);
        for s in h.symbols() {
            let ok = space.is_base_symbol(&s)
                || space.momenta().contains(&s)
                || space.jet_parts(&s).is_some_and(|(_, a)| a.tau_order() == 0);
            if !ok {
                return Err(HamiltonError::InvalidHamiltonian(format!("unexpected symbol `{}`", s.name())));
            }
        }
        let field_rates: Vec<Expr> = space.momenta().iter().map(|p| differentiate(&h, p)).collect();
        let mut momentum_rates = Vec::with_capacity(space.m());
        for i in 0..space.m() {
            momentum_rates.push(variational_rate(&space, &h, i)?);
        }
        let monitor = differentiate(&h, space.tau());
        Ok(HamiltonianSystem { space, hamiltonian: h, field_rates, momentum_rates, monitor, legendre })
    }

    pub fn space(&self) -> &JetSpace {
        &self.space
    }

    pub fn hamiltonian(&self) -> &Expr {
        &self.hamiltonian
    }

    /// `∂𝓗/∂p̄_i`.
    pub fn field_rate(&self, i: usize) -> &Expr {
        &self.field_rates[i]
    }

    pub fn field_rates(&self) -> &[Expr] {
        &self.field_rates
    }

    /// `−∂𝓗/∂y^i`, variational in the spatial jets.
    pub fn momentum_rate(&self, i: usize) -> &Expr {
        &self.momentum_rates[i]
    }

    pub fn momentum_rates(&self) -> &[Expr] {
        &self.momentum_rates
    }

    /// `∂_τ𝓗`, the predicted value of `𝓗̇` along solutions.
    pub fn monitor(&self) -> &Expr {
        &self.monitor
    }

    pub fn legendre_data(&self) -> Option<&LegendreData> {
        self.legendre.as_ref()
    }

    pub fn is_autonomous(&self) -> bool {
        self.monitor.is_literal_zero()
    }

    pub fn has_spatial_jets(&self) -> bool {
        self.hamiltonian.symbols().iter().any(|s| self.space.jet_parts(s).is_some_and(|(_, a)| !a.is_zero()))
    }

    /// `(y^i, p̄_i)` in field order, fields first.
    pub fn state_symbols(&self) -> Vec<Symbol> {
        self.space.fields().iter().chain(self.space.momenta()).cloned().collect()
    }

    /// The equations `ẏ^i = …` followed by `ṗ̄_i = …`.
    pub fn equations(&self) -> Vec<Equation> {
        let mut out = Vec::with_capacity(2 * self.space.m());
        for i in 0..self.space.m() {
            out.push(Equation { lhs: self.space.velocity(i).name().to_string(), rhs: self.field_rates[i].clone() });
        }
        for i in 0..self.space.m() {
            let lhs = format!("d({}, {})", self.space.momentum(i).name(), self.space.tau().name());
            out.push(Equation { lhs, rhs: self.momentum_rates[i].clone() });
        }
        out
    }

    /// The monitor written as an equation for `𝓗̇`.
    pub fn monitor_equation(&self) -> Equation {
        Equation { lhs: format!("d(H, {})", self.space.tau().name()), rhs: self.monitor.clone() }
    }
}

fn variational_rate(space: &JetSpace, h: &Expr, i: usize) -> Result<Expr, HamiltonError> {
    let mut terms = Vec::new();
    for s in h.symbols() {
        let Some((j, alpha)) = space.jet_parts(&s) else { continue };
        if j != i {
            continue;
        }
        let partial = differentiate(h, &s);
        if alpha.is_zero() {
            terms.push(-partial);
            continue;
        }
        if let Some(p) = partial.symbols().into_iter().find(|q| q.is_momentum()) {
            return Err(HamiltonError::InvalidHamiltonian(format!(
                "∂𝓗/∂{} depends on {}; spatial derivatives of momenta are not coordinates",
                s.name(),
                p.name()
            )));
        }
        let order = alpha.spatial_order();
        let d = space.total_derivative_multi(&partial, &MultiIndex::new(alpha.spatial().to_vec(), 0));
        terms.push(if order % 2 == 1 { d } else { -d });
    }
    Ok(simplify(&Expr::sum(terms)))
}
