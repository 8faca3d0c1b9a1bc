use crate::hamilton::{solve_linear, HamiltonianSystem, LagrangianModel};
use crate::jetcalc::{euler_lagrange, Direction, JetSpace};
use crate::symexpr::{coefficient, differentiate, simplify, substitute, Bindings, CompiledExpr, Env, Expr, Symbol, SymbolError};

use super::EvolveError;

/// `dx/dτ = f(τ, x)` with right-hand sides compiled from symbolic
/// expressions, plus the energy function and its predicted `τ`-derivative.
#[derive(Clone, Debug)]
pub struct OdeSystem {
    names: Vec<String>,
    rhs: Vec<CompiledExpr>,
    energy: CompiledExpr,
    monitor: CompiledExpr,
    /// Parameter values appended after `(τ, x)` in every evaluation.
    params: Vec<f64>,
    explicit_tau: bool,
    reversed: bool,
}

fn check_point_dependence(space: &JetSpace, exprs: &[&Expr], allowed: &[Symbol]) -> Result<(), EvolveError> {
    for e in exprs {
        for s in e.symbols() {
            if !(allowed.contains(&s) || s.is_parameter()) {
                let why = if space.direction_of(&s).is_some() {
                    "depends on a base coordinate"
                } else {
                    "depends on a spatial jet"
                };
                return Err(EvolveError::UnsupportedSystem(format!("`{}`: {why}", s.name())));
            }
        }
    }
    Ok(())
}

/// An undefined value at a state that has run off to huge magnitudes is an
/// overflow (`inf − inf`), not a domain error.
fn overflow_or(e: SymbolError, tau: f64, x: &[f64]) -> EvolveError {
    if x.iter().any(|v| !v.is_finite() || v.abs() > 1e100) {
        EvolveError::NonFiniteState(tau)
    } else {
        EvolveError::Evaluation(e)
    }
}

impl OdeSystem {
    fn build(
        names: Vec<String>,
        slots: &[Symbol],
        rhs: &[Expr],
        energy: &Expr,
        monitor: &Expr,
        params: &Env,
    ) -> Result<Self, EvolveError> {
        let mut syms: Vec<Symbol> = slots.to_vec();
        let mut values = Vec::new();
        let mut used: Vec<Symbol> = rhs
            .iter()
            .chain([energy, monitor])
            .flat_map(|e| e.symbols())
            .filter(Symbol::is_parameter)
            .collect();
        used.sort();
        used.dedup();
        for p in used {
            let v = params.get(&p).ok_or_else(|| crate::symexpr::SymbolError::UnboundSymbol(p.name().to_string()))?;
            syms.push(p);
            values.push(*v);
        }
        let compile = |e: &Expr| CompiledExpr::compile(e, &syms);
        Ok(OdeSystem {
            names,
            rhs: rhs.iter().map(compile).collect::<Result<_, _>>()?,
            energy: compile(energy)?,
            monitor: compile(monitor)?,
            params: values,
            explicit_tau: !monitor.is_literal_zero(),
            reversed: false,
        })
    }

    /// State `(y^i, p̄_i)` driven by the formal Hamilton equations; the energy
    /// is `𝓗`. Fields must depend on `τ` only.
    pub fn from_hamiltonian(sys: &HamiltonianSystem, params: &Env) -> Result<Self, EvolveError> {
        let space = sys.space();
        let state = sys.state_symbols();
        let mut allowed = vec![space.tau().clone()];
        allowed.extend(state.iter().cloned());
        let rhs: Vec<Expr> = sys.field_rates().iter().chain(sys.momentum_rates()).cloned().collect();
        let exprs: Vec<&Expr> = rhs.iter().chain([sys.hamiltonian()]).collect();
        check_point_dependence(space, &exprs, &allowed)?;
        let names = state.iter().map(|s| s.name().to_string()).collect();
        Self::build(names, &allowed, &rhs, sys.hamiltonian(), sys.monitor(), params)
    }

    /// State `(y^i, ẏ^i)` driven by the Euler–Lagrange equations solved for
    /// `ÿ`; the energy is `ẏ^i ∂L/∂ẏ^i − L`.
    pub fn from_lagrangian(model: &LagrangianModel, params: &Env) -> Result<Self, EvolveError> {
        let space = model.space();
        let l = model.lagrangian();
        let m = space.m();
        let vel = space.velocities();
        let acc: Vec<Symbol> = (0..m).map(|i| space.jet_along(i, &[Direction::Tau, Direction::Tau])).collect();
        let mut matrix = Vec::with_capacity(m);
        let mut rest = Vec::with_capacity(m);
        let at_rest: Bindings = acc.iter().map(|a| (a.clone(), Expr::zero())).collect();
        for i in 0..m {
            let el = euler_lagrange(space, l, i).map_err(|e| EvolveError::UnsupportedSystem(e.to_string()))?;
            matrix.push(acc.iter().map(|a| coefficient(&el, &Expr::sym(a), 1)).collect::<Vec<_>>());
            rest.push(simplify(&-substitute(&el, &at_rest)));
        }
        let accel = solve_linear(matrix, rest)
            .ok_or_else(|| EvolveError::UnsupportedSystem("singular acceleration matrix".to_string()))?;
        let mut rhs: Vec<Expr> = vel.iter().map(Expr::sym).collect();
        rhs.extend(accel);
        let energy = simplify(&(Expr::sum(vel.iter().map(|v| Expr::sym(v) * differentiate(l, v)).collect()) - l.clone()));
        let monitor = simplify(&-differentiate(l, space.tau()));
        let mut allowed = vec![space.tau().clone()];
        allowed.extend(space.fields().iter().cloned());
        allowed.extend(vel.iter().cloned());
        let exprs: Vec<&Expr> = rhs.iter().chain([&energy]).collect();
        check_point_dependence(space, &exprs, &allowed)?;
        let names = space.fields().iter().chain(&vel).map(|s| s.name().to_string()).collect();
        Self::build(names, &allowed, &rhs, &energy, &monitor, params)
    }

    pub fn dim(&self) -> usize {
        self.rhs.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Whether `∂_τ` of the energy is not identically zero.
    pub fn is_explicit_in_tau(&self) -> bool {
        self.explicit_tau
    }

    /// `s ↦ x(−s)`: right-hand side `−f(−s, x)`, so integrating forward in
    /// `s` runs the original system backward in `τ`.
    pub fn time_reversed(&self) -> Self {
        let mut out = self.clone();
        out.reversed = !self.reversed;
        out
    }

    fn buffer(&self, tau: f64, x: &[f64], buf: &mut Vec<f64>) {
        buf.clear();
        buf.push(if self.reversed { -tau } else { tau });
        buf.extend_from_slice(x);
        buf.extend_from_slice(&self.params);
    }

    pub(crate) fn rhs_into(&self, tau: f64, x: &[f64], buf: &mut Vec<f64>, out: &mut [f64]) -> Result<(), EvolveError> {
        self.buffer(tau, x, buf);
        for (o, f) in out.iter_mut().zip(&self.rhs) {
            let v = f.eval(buf).map_err(|e| overflow_or(e, tau, x))?;
            *o = if self.reversed { -v } else { v };
        }
        Ok(())
    }

    /// `f(τ, x)`.
    pub fn rhs(&self, tau: f64, x: &[f64]) -> Result<Vec<f64>, EvolveError> {
        let mut out = vec![0.0; self.dim()];
        self.rhs_into(tau, x, &mut Vec::new(), &mut out)?;
        Ok(out)
    }

    pub fn energy(&self, tau: f64, x: &[f64]) -> Result<f64, EvolveError> {
        let mut buf = Vec::new();
        self.buffer(tau, x, &mut buf);
        self.energy.eval(&buf).map_err(|e| overflow_or(e, tau, x))
    }

    /// Predicted derivative of the energy along solutions, `∂_τ𝓗`, in the
    /// integration variable (negated for a reversed system).
    pub fn monitor(&self, tau: f64, x: &[f64]) -> Result<f64, EvolveError> {
        let mut buf = Vec::new();
        self.buffer(tau, x, &mut buf);
        let v = self.monitor.eval(&buf)?;
        Ok(if self.reversed { -v } else { v })
    }
}
