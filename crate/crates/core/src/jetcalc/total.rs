use std::collections::BTreeMap;

use crate::symexpr::{differentiate, simplify, substitute, Bindings, Expr, Symbol};

use super::{DifferentialForm, Direction, JetError, JetSpace, MultiIndex};

impl JetSpace {
    /// `D_dir e = ∂_dir e + Σ y^j_{α+dir} ∂e/∂y^j_α`.
    pub fn total_derivative(&self, e: &Expr, dir: Direction) -> Expr {
        let mut terms = vec![differentiate(e, self.direction_symbol(dir))];
        for s in e.symbols() {
            if let Some(up) = self.shifted(&s, dir) {
                terms.push(Expr::sym(&up) * differentiate(e, &s));
            }
        }
        simplify(&Expr::sum(terms))
    }

    /// `D_α e`, applying one total derivative per direction of `α`.
    pub fn total_derivative_multi(&self, e: &Expr, alpha: &MultiIndex) -> Expr {
        alpha.directions().into_iter().fold(e.clone(), |acc, d| self.total_derivative(&acc, d))
    }

    /// `ϑ^j_α = dy^j_α − Σ_dir y^j_{α+dir} d(dir)`.
    pub fn contact_form(&self, field: usize, alpha: &MultiIndex) -> DifferentialForm {
        let mut out = DifferentialForm::differential(&self.jet(field, alpha));
        for d in self.directions() {
            let up = self.jet(field, &alpha.shifted(d));
            out = &out - &self.direction_differential(d).scale(&Expr::sym(&up));
        }
        out
    }
}

/// The jet prolongation of a section: every `y^i_α` up to the requested order
/// mapped to the corresponding partial derivative of the section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prolongation {
    map: Bindings,
    order: u32,
}

impl Prolongation {
    pub fn get(&self, s: &Symbol) -> Option<&Expr> {
        self.map.get(s)
    }

    pub fn bindings(&self) -> &Bindings {
        &self.map
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Substitutes the prolonged section into `e`.
    pub fn apply(&self, e: &Expr) -> Expr {
        substitute(e, &self.map)
    }

    /// Pulls a form on `J_rY` back to the base along the prolongation.
    pub fn pullback(&self, w: &DifferentialForm) -> DifferentialForm {
        w.pullback(&self.map)
    }
}

/// `j_r s`. `section` maps field symbols to expressions in the base
/// coordinates, `τ` and parameters; missing fields are left free.
pub fn prolong(space: &JetSpace, section: &Bindings, r: u32) -> Result<Prolongation, JetError> {
    let mut map = Bindings::new();
    for (i, field) in space.fields().iter().enumerate() {
        let Some(s) = section.get(field) else { continue };
        if let Some(bad) = s.symbols().into_iter().find(|v| !space.is_base_symbol(v)) {
            return Err(JetError::NotASection(format!("{} = {s} (depends on {bad})", field.name())));
        }
        let mut level: BTreeMap<MultiIndex, Expr> = BTreeMap::new();
        level.insert(MultiIndex::zero(space.n()), simplify(s));
        map.insert(field.clone(), simplify(s));
        for k in 1..=r {
            let mut next = BTreeMap::new();
            for alpha in MultiIndex::all_of_order(space.n(), k) {
                // lower along the last direction so the parent is already known
                let dir = *alpha.directions().last().unwrap();
                let parent = alpha.lowered(dir).unwrap();
                let value = differentiate(&level[&parent], space.direction_symbol(dir));
                map.insert(space.jet(i, &alpha), value.clone());
                next.insert(alpha, value);
            }
            level = next;
        }
    }
    Ok(Prolongation { map, order: r })
}

/// Splitting of a 1-form into its horizontal part (spanned by `dx^λ, dτ`) and
/// its contact part (spanned by the `ϑ^j_α`).
#[derive(Clone, Debug)]
pub struct ContactSplit {
    pub horizontal: DifferentialForm,
    pub contact: DifferentialForm,
    /// Coefficient of each `ϑ^j_α`, keyed by the jet coordinate `y^j_α`.
    pub contact_coefficients: BTreeMap<Symbol, Expr>,
}

/// Decomposes a 1-form on `J_{r-1}Y` viewed on `J_rY`.
pub fn contact_decompose(space: &JetSpace, w: &DifferentialForm, r: u32) -> Result<ContactSplit, JetError> {
    if r == 0 {
        return Err(JetError::OrderTooLow);
    }
    let mut horizontal = DifferentialForm::zero();
    let mut contact = DifferentialForm::zero();
    let mut coefficients = BTreeMap::new();
    for (key, c) in w.terms() {
        if key.len() != 1 {
            return Err(JetError::WrongDegree(key.len()));
        }
        let z = &key[0];
        if space.direction_of(z).is_some() {
            horizontal = &horizontal + &DifferentialForm::monomial(c.clone(), key);
        } else if let Some((j, alpha)) = space.jet_parts(z) {
            if alpha.total_order() >= r {
                return Err(JetError::OrderTooHigh { found: alpha.total_order(), max: r - 1 });
            }
            let theta = space.contact_form(j, &alpha);
            let dz = DifferentialForm::differential(z);
            horizontal = &horizontal + &(&dz - &theta).scale(c);
            contact = &contact + &theta.scale(c);
            coefficients.insert(z.clone(), c.clone());
        } else {
            return Err(JetError::UnknownSymbol(z.name().to_string()));
        }
    }
    Ok(ContactSplit { horizontal, contact, contact_coefficients: coefficients })
}

/// `Σ_α (−1)^{|α|} D_α ∂L/∂y^i_α` over jet orders up to two, `τ` included.
pub fn euler_lagrange(space: &JetSpace, lagrangian: &Expr, field: usize) -> Result<Expr, JetError> {
    const MAX: u32 = 2;
    let syms = lagrangian.symbols();
    let found = space.max_order(syms.iter());
    if found > MAX {
        return Err(JetError::OrderTooHigh { found, max: MAX });
    }
    let mut terms = Vec::new();
    for s in &syms {
        let Some((i, alpha)) = space.jet_parts(s) else { continue };
        if i != field {
            continue;
        }
        let partial = differentiate(lagrangian, s);
        let term = space.total_derivative_multi(&partial, &alpha);
        terms.push(if alpha.total_order() % 2 == 1 { -term } else { term });
    }
    Ok(simplify(&Expr::sum(terms)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{bind, equivalent, is_zero};

    fn space() -> JetSpace {
        JetSpace::new(&["x"], "tau", &["y"], 2).unwrap()
    }

    fn x(s: &JetSpace) -> Expr {
        Expr::sym(s.base(0))
    }

    fn jet(s: &JetSpace, dirs: &[Direction]) -> Expr {
        Expr::sym(&s.jet_along(0, dirs))
    }

    const X: Direction = Direction::Base(0);
    const T: Direction = Direction::Tau;

    #[test]
    fn total_derivative_of_field() {
        let s = space();
        let y = jet(&s, &[]);
        assert_eq!(s.total_derivative(&y, X), jet(&s, &[X]));
        assert!(s.total_derivative(&Expr::int(7), T).is_literal_zero());
        let e = y.clone() * jet(&s, &[X]);
        let expected = jet(&s, &[X]).powi(2) + y * jet(&s, &[X, X]);
        assert!(equivalent(&s.total_derivative(&e, X), &expected));
    }

    #[test]
    fn prolong_examples() {
        let s = space();
        let p = prolong(&s, &bind(s.field(0), x(&s).powi(2)), 2).unwrap();
        assert_eq!(p.get(&s.jet_along(0, &[X])).unwrap(), &(x(&s) * 2).simplified());
        assert_eq!(p.get(&s.jet_along(0, &[X, X])).unwrap(), &Expr::int(2));
        assert!(p.get(&s.jet_along(0, &[T])).unwrap().is_literal_zero());
        let tau = Expr::sym(s.tau());
        let p = prolong(&s, &bind(s.field(0), tau.sin()), 1).unwrap();
        assert_eq!(p.get(&s.velocity(0)).unwrap(), &tau.cos());
        let bad = prolong(&s, &bind(s.field(0), jet(&s, &[X])), 1);
        assert!(matches!(bad, Err(JetError::NotASection(_))));
    }

    #[test]
    fn decompose_dy() {
        let s = space();
        let dy = DifferentialForm::differential(s.field(0));
        let split = contact_decompose(&s, &dy, 1).unwrap();
        let expected = &s.direction_differential(X).scale(&jet(&s, &[X]))
            + &s.direction_differential(T).scale(&jet(&s, &[T]));
        assert!(split.horizontal.equals(&expected));
        assert!(split.contact.equals(&s.contact_form(0, &MultiIndex::zero(1))));
        let dx = s.direction_differential(X);
        let split = contact_decompose(&s, &dx, 1).unwrap();
        assert!(split.horizontal.equals(&dx) && split.contact.is_zero());
        assert_eq!(contact_decompose(&s, &dx, 0).unwrap_err(), JetError::OrderTooLow);
    }

    #[test]
    fn euler_lagrange_examples() {
        let s = space();
        let y = jet(&s, &[]);
        let half = Expr::rational(1, 2);
        let osc = half.clone() * jet(&s, &[T]).powi(2) - half.clone() * y.powi(2);
        let el = euler_lagrange(&s, &osc, 0).unwrap();
        assert!(equivalent(&el, &(-jet(&s, &[T, T]) - y.clone())));
        let wave = half.clone() * jet(&s, &[T]).powi(2) - half * jet(&s, &[X]).powi(2);
        let el = euler_lagrange(&s, &wave, 0).unwrap();
        assert!(equivalent(&el, &(jet(&s, &[X, X]) - jet(&s, &[T, T]))));
        assert!(is_zero(&euler_lagrange(&s, &x(&s).sin(), 0).unwrap()));
    }
}
