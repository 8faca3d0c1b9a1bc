use crate::jetcalc::JetSpace;
use crate::symexpr::{differentiate, is_zero, simplify, substitute, Bindings, Expr, Symbol};

use super::{HamiltonError, HamiltonianSystem};

/// A Lagrangian density in `(x, τ, y, ẏ = y_τ)` and optionally spatial jets.
#[derive(Clone, Debug)]
pub struct LagrangianModel {
    space: JetSpace,
    lagrangian: Expr,
}

impl LagrangianModel {
    pub fn new(space: JetSpace, lagrangian: Expr) -> Result<Self, HamiltonError> {
        let lagrangian = simplify(&lagrangian);
        for s in lagrangian.symbols() {
            if s.is_momentum() {
                return Err(HamiltonError::InvalidLagrangian(format!("depends on momentum {}", s.name())));
            }
            if space.is_base_symbol(&s) {
                continue;
            }
            match space.jet_parts(&s) {
                Some((_, a)) if a.tau_order() == 0 || (a.tau_order() == 1 && a.spatial_order() == 0) => {}
                Some(_) => {
                    return Err(HamiltonError::InvalidLagrangian(format!(
                        "`{}` is not a field, velocity or spatial jet",
                        s.name()
                    )))
                }
                None => return Err(HamiltonError::InvalidLagrangian(format!("unknown symbol `{}`", s.name()))),
            }
        }
        Ok(LagrangianModel { space, lagrangian })
    }

    pub fn space(&self) -> &JetSpace {
        &self.space
    }

    pub fn lagrangian(&self) -> &Expr {
        &self.lagrangian
    }

    pub fn has_spatial_jets(&self) -> bool {
        self.lagrangian
            .symbols()
            .iter()
            .any(|s| self.space.jet_parts(s).is_some_and(|(_, a)| a.spatial_order() > 0))
    }
}

/// What the Legendre map produced besides `𝓗`.
#[derive(Clone, Debug)]
pub struct LegendreData {
    pub lagrangian: Expr,
    /// `p̄_i = ∂L/∂ẏ^i` as functions of the velocities.
    pub momenta: Vec<Expr>,
    /// `ẏ^i` solved in terms of the momenta.
    pub velocities: Vec<Expr>,
}

/// Solves `W v = r` by Gaussian elimination, pivoting on the first entry that
/// does not simplify to zero. `None` when `W` is singular.
pub(crate) fn solve_linear(mut w: Vec<Vec<Expr>>, mut r: Vec<Expr>) -> Option<Vec<Expr>> {
    let n = r.len();
    for k in 0..n {
        let pivot = (k..n).find(|&row| !is_zero(&w[row][k]))?;
        w.swap(k, pivot);
        r.swap(k, pivot);
        let inv = w[k][k].recip();
        for row in (k + 1)..n {
            if w[row][k].is_literal_zero() {
                continue;
            }
            let factor = simplify(&(w[row][k].clone() * &inv));
            for col in k..n {
                w[row][col] = simplify(&(w[row][col].clone() - factor.clone() * &w[k][col]));
            }
            r[row] = simplify(&(r[row].clone() - factor * &r[k]));
        }
    }
    let mut v = vec![Expr::zero(); n];
    for k in (0..n).rev() {
        let rest = Expr::sum(((k + 1)..n).map(|c| w[k][c].clone() * &v[c]).collect());
        v[k] = simplify(&((r[k].clone() - rest) / w[k][k].clone()));
    }
    Some(v)
}

/// `p̄_i = ∂L/∂ẏ^i`, `𝓗 = p̄_i ẏ^i − L` with the velocities eliminated. The
/// momentum relations must be affine in the velocities.
pub fn legendre(model: &LagrangianModel) -> Result<HamiltonianSystem, HamiltonError> {
    let space = model.space();
    let l = model.lagrangian();
    let vel: Vec<Symbol> = space.velocities();
    let momenta: Vec<Expr> = vel.iter().map(|v| differentiate(l, v)).collect();
    let mut hessian = Vec::with_capacity(vel.len());
    for p in &momenta {
        let mut row = Vec::with_capacity(vel.len());
        for v in &vel {
            let w = differentiate(p, v);
            if let Some(bad) = w.symbols().into_iter().find(|s| vel.contains(s)) {
                return Err(HamiltonError::NonQuadratic(format!("∂²L/∂ẏ² depends on {}", bad.name())));
            }
            row.push(w);
        }
        hessian.push(row);
    }
    let at_rest: Bindings = vel.iter().map(|v| (v.clone(), Expr::zero())).collect();
    let rhs: Vec<Expr> = momenta
        .iter()
        .enumerate()
        .map(|(i, p)| simplify(&(Expr::sym(space.momentum(i)) - substitute(p, &at_rest))))
        .collect();
    let velocities = solve_linear(hessian, rhs)
        .ok_or_else(|| HamiltonError::DegenerateLegendre("velocity Hessian is singular".to_string()))?;
    let solved: Bindings = vel.iter().cloned().zip(velocities.iter().cloned()).collect();
    let pv = Expr::sum((0..vel.len()).map(|i| Expr::sym(space.momentum(i)) * Expr::sym(&vel[i])).collect());
    let h = substitute(&(pv - l.clone()), &solved);
    let data = LegendreData { lagrangian: l.clone(), momenta, velocities };
    HamiltonianSystem::with_legendre(space.clone(), h, Some(data))
}
