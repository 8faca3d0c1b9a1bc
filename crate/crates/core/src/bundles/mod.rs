//! Connections on the composite bundle `Y → Θ → X`, stored as coefficient
//! functions.

use std::collections::BTreeMap;

use crate::jetcalc::{DifferentialForm, JetSpace, VectorField};
use crate::symexpr::{bind, differentiate, is_zero, simplify, substitute, Bindings, Expr, Symbol};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BundleError {
    #[error("{what} coefficient may not depend on `{symbol}`")]
    InvalidCoefficient { what: &'static str, symbol: String },
    #[error("expected {expected} coefficients, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

fn check_len(expected: usize, found: usize) -> Result<(), BundleError> {
    if expected == found {
        Ok(())
    } else {
        Err(BundleError::DimensionMismatch { expected, found })
    }
}

fn check_deps(what: &'static str, e: &Expr, allowed: impl Fn(&Symbol) -> bool) -> Result<(), BundleError> {
    match e.symbols().into_iter().find(|s| !allowed(s)) {
        Some(s) => Err(BundleError::InvalidCoefficient { what, symbol: s.name().to_string() }),
        None => Ok(()),
    }
}

/// `γ_Θ = dτ ⊗ (∂_τ + A^i_τ ∂_i) + dx^λ ⊗ (∂_λ + A^i_λ ∂_i)` on `Y → Θ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionTheta {
    /// `A^i_λ`, indexed `[i][λ]`.
    base: Vec<Vec<Expr>>,
    /// `A^i_τ`.
    tau: Vec<Expr>,
}

impl ConnectionTheta {
    pub fn new(space: &JetSpace, base: Vec<Vec<Expr>>, tau: Vec<Expr>) -> Result<Self, BundleError> {
        check_len(space.m(), base.len())?;
        check_len(space.m(), tau.len())?;
        let allowed = |s: &Symbol| space.is_base_symbol(s) || space.fields().contains(s);
        for row in &base {
            check_len(space.n(), row.len())?;
            for a in row {
                check_deps("A^i_λ", a, allowed)?;
            }
        }
        for a in &tau {
            check_deps("A^i_τ", a, allowed)?;
        }
        Ok(ConnectionTheta {
            base: base.iter().map(|r| r.iter().map(simplify).collect()).collect(),
            tau: tau.iter().map(simplify).collect(),
        })
    }

    /// The trivial connection `A = 0`.
    pub fn zero(space: &JetSpace) -> Self {
        ConnectionTheta { base: vec![vec![Expr::zero(); space.n()]; space.m()], tau: vec![Expr::zero(); space.m()] }
    }

    pub fn base(&self, i: usize, l: usize) -> &Expr {
        &self.base[i][l]
    }

    pub fn tau(&self, i: usize) -> &Expr {
        &self.tau[i]
    }

    pub fn m(&self) -> usize {
        self.tau.len()
    }

    pub fn n(&self) -> usize {
        self.base.first().map_or(0, Vec::len)
    }
}

/// `Γ = dx^λ ⊗ (∂_λ + Γ_λ ∂_τ)` on `Θ → X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionGamma {
    coeffs: Vec<Expr>,
}

impl ConnectionGamma {
    pub fn new(space: &JetSpace, coeffs: Vec<Expr>) -> Result<Self, BundleError> {
        check_len(space.n(), coeffs.len())?;
        for g in &coeffs {
            check_deps("Γ_λ", g, |s| space.is_base_symbol(s))?;
        }
        Ok(ConnectionGamma { coeffs: coeffs.iter().map(simplify).collect() })
    }

    pub fn zero(space: &JetSpace) -> Self {
        ConnectionGamma { coeffs: vec![Expr::zero(); space.n()] }
    }

    pub fn get(&self, l: usize) -> &Expr {
        &self.coeffs[l]
    }

    pub fn coefficients(&self) -> &[Expr] {
        &self.coeffs
    }
}

/// `γ = γ_Θ ∘ Γ` on `Y → X`, projectable over `Γ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositeConnection {
    /// `γ^i_λ`, indexed `[i][λ]`.
    coeffs: Vec<Vec<Expr>>,
    theta: ConnectionTheta,
    gamma: ConnectionGamma,
}

impl CompositeConnection {
    pub fn get(&self, i: usize, l: usize) -> &Expr {
        &self.coeffs[i][l]
    }

    pub fn coefficients(&self) -> &[Vec<Expr>] {
        &self.coeffs
    }

    pub fn theta(&self) -> &ConnectionTheta {
        &self.theta
    }

    pub fn gamma(&self) -> &ConnectionGamma {
        &self.gamma
    }

    /// Re-derives `A^i_λ + A^i_τ Γ_λ` and compares with the stored coefficients.
    pub fn is_consistent(&self) -> bool {
        let again = compose_coefficients(&self.theta, &self.gamma);
        again.iter().flatten().zip(self.coeffs.iter().flatten()).all(|(a, b)| is_zero(&(a.clone() - b)))
    }

    /// Coefficients with `τ = h(x)` substituted.
    pub fn restrict(&self, space: &JetSpace, h: &Expr) -> Vec<Vec<Expr>> {
        let at_h = bind(space.tau(), h.clone());
        self.coeffs.iter().map(|r| r.iter().map(|c| substitute(c, &at_h)).collect()).collect()
    }
}

fn compose_coefficients(theta: &ConnectionTheta, gamma: &ConnectionGamma) -> Vec<Vec<Expr>> {
    (0..theta.m())
        .map(|i| {
            (0..theta.n())
                .map(|l| simplify(&(theta.base(i, l).clone() + theta.tau(i).clone() * gamma.get(l))))
                .collect()
        })
        .collect()
}

pub fn compose_connection(theta: &ConnectionTheta, gamma: &ConnectionGamma) -> CompositeConnection {
    CompositeConnection { coeffs: compose_coefficients(theta, gamma), theta: theta.clone(), gamma: gamma.clone() }
}

/// Connection `γ_h` on `Y_h = h*Y → X`, coefficients `[i][λ]` in `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackConnection {
    coeffs: Vec<Vec<Expr>>,
}

impl PullbackConnection {
    pub fn get(&self, i: usize, l: usize) -> &Expr {
        &self.coeffs[i][l]
    }

    pub fn coefficients(&self) -> &[Vec<Expr>] {
        &self.coeffs
    }

    /// `∇_λ s^i = ∂_λ s^i − γ_h^i_λ(x, s)` for a section `s` of `Y_h → X`.
    pub fn covariant_differential(&self, space: &JetSpace, section: &Bindings) -> BTreeMap<(usize, usize), Expr> {
        let mut out = BTreeMap::new();
        for (i, f) in space.fields().iter().enumerate() {
            let s = section.get(f).cloned().unwrap_or_else(|| Expr::sym(f));
            for (l, x) in space.base_coords().iter().enumerate() {
                let d = differentiate(&s, x) - substitute(&self.coeffs[i][l], section);
                out.insert((i, l), simplify(&d));
            }
        }
        out
    }
}

/// `γ_h^i_λ = A^i_λ(x, h, y) + A^i_τ(x, h, y) ∂_λh`.
pub fn pullback_connection(space: &JetSpace, theta: &ConnectionTheta, h: &Expr) -> PullbackConnection {
    let at_h = bind(space.tau(), h.clone());
    let coeffs = (0..space.m())
        .map(|i| {
            let at = substitute(theta.tau(i), &at_h);
            space
                .base_coords()
                .iter()
                .enumerate()
                .map(|(l, x)| simplify(&(substitute(theta.base(i, l), &at_h) + at.clone() * differentiate(h, x))))
                .collect()
        })
        .collect();
    PullbackConnection { coeffs }
}

/// `∂_λh − Γ_λ(x, h)` for each base direction.
pub fn integrality_defect(space: &JetSpace, gamma: &ConnectionGamma, h: &Expr) -> Vec<Expr> {
    let at_h = bind(space.tau(), h.clone());
    space
        .base_coords()
        .iter()
        .enumerate()
        .map(|(l, x)| simplify(&(differentiate(h, x) - substitute(gamma.get(l), &at_h))))
        .collect()
}

/// Whether `h` is an integral section of `Γ`, the condition under which
/// `γ_Θ ∘ Γ` reduces to the pull-back connection `γ_h`.
pub fn is_reducible(space: &JetSpace, gamma: &ConnectionGamma, h: &Expr) -> bool {
    integrality_defect(space, gamma, h).iter().all(Expr::is_literal_zero)
}

/// `Δ_{γ_Θ}` evaluated on the 1-jet of `x ↦ (h(x), s(x, h(x)))`:
/// `Δ^i_λ = y^i_λ − A^i_λ − A^i_τ τ_λ`.
pub fn vertical_covariant_differential(
    space: &JetSpace,
    theta: &ConnectionTheta,
    section: &Bindings,
    h: &Expr,
) -> BTreeMap<(usize, usize), Expr> {
    let at_h = bind(space.tau(), h.clone());
    let mut point = Bindings::new();
    point.insert(space.tau().clone(), h.clone());
    for f in space.fields() {
        let s = section.get(f).cloned().unwrap_or_else(|| Expr::sym(f));
        point.insert(f.clone(), substitute(&s, &at_h));
    }
    let mut out = BTreeMap::new();
    for (i, f) in space.fields().iter().enumerate() {
        let restricted = &point[f];
        for (l, x) in space.base_coords().iter().enumerate() {
            let y_l = differentiate(restricted, x);
            let tau_l = differentiate(h, x);
            let a = substitute(theta.base(i, l), &point);
            let at = substitute(theta.tau(i), &point);
            out.insert((i, l), simplify(&(y_l - a - at * tau_l)));
        }
    }
    out
}

/// The section `s(x, τ)` restricted along `h`, as a section of `Y_h → X`.
pub fn restrict_section(space: &JetSpace, section: &Bindings, h: &Expr) -> Bindings {
    let at_h = bind(space.tau(), h.clone());
    space
        .fields()
        .iter()
        .filter_map(|f| section.get(f).map(|s| (f.clone(), substitute(s, &at_h))))
        .collect()
}

/// Projectors on `VY = V_ΘY ⊕ γ_Θ(Y ×_Θ VΘ)` in the frame `(∂_τ, ∂_1, …, ∂_m)`,
/// and their transposes on the dual splitting of `V*Y`.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub vertical: Vec<Vec<Expr>>,
    pub horizontal: Vec<Vec<Expr>>,
}

type Matrix = Vec<Vec<Expr>>;

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|r| (0..n).map(|c| simplify(&Expr::sum((0..n).map(|k| a[r][k].clone() * &b[k][c]).collect()))).collect())
        .collect()
}

fn transpose(a: &Matrix) -> Matrix {
    let n = a.len();
    (0..n).map(|r| (0..n).map(|c| a[c][r].clone()).collect()).collect()
}

fn mat_eq(a: &Matrix, b: &Matrix) -> bool {
    a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| is_zero(&(x.clone() - y)))
}

impl Splitting {
    pub fn new(theta: &ConnectionTheta) -> Self {
        let m = theta.m();
        let mut vertical = vec![vec![Expr::zero(); m + 1]; m + 1];
        let mut horizontal = vec![vec![Expr::zero(); m + 1]; m + 1];
        // horizontal lift of ∂_τ is ∂_τ + A^i_τ ∂_i
        horizontal[0][0] = Expr::one();
        for i in 0..m {
            horizontal[i + 1][0] = theta.tau(i).clone();
            vertical[i + 1][i + 1] = Expr::one();
            vertical[i + 1][0] = simplify(&-theta.tau(i).clone());
        }
        Splitting { vertical, horizontal }
    }

    /// `P_V² = P_V`, `P_H² = P_H`, `P_V P_H = P_H P_V = 0`, `P_V + P_H = 1`, on
    /// `VY` and, transposed, on `V*Y`.
    pub fn check(&self) -> bool {
        let n = self.vertical.len();
        let id: Matrix =
            (0..n).map(|r| (0..n).map(|c| if r == c { Expr::one() } else { Expr::zero() }).collect()).collect();
        let zero: Matrix = vec![vec![Expr::zero(); n]; n];
        let holds = |v: &Matrix, h: &Matrix| {
            let sum: Matrix = (0..n).map(|r| (0..n).map(|c| v[r][c].clone() + &h[r][c]).collect()).collect();
            mat_eq(&mat_mul(v, v), v)
                && mat_eq(&mat_mul(h, h), h)
                && mat_eq(&mat_mul(v, h), &zero)
                && mat_eq(&mat_mul(h, v), &zero)
                && mat_eq(&sum, &id)
        };
        holds(&self.vertical, &self.horizontal) && holds(&transpose(&self.vertical), &transpose(&self.horizontal))
    }
}

/// A connection on `Π_Θ → X` given by its `∂_τ` component
/// `γ_τ = ∂_τ + γ^i ∂_i + γ̄_i ∂̄^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseConnection {
    pub field_rates: Vec<Expr>,
    pub momentum_rates: Vec<Expr>,
}

impl PhaseConnection {
    pub fn zero(space: &JetSpace) -> Self {
        PhaseConnection { field_rates: vec![Expr::zero(); space.m()], momentum_rates: vec![Expr::zero(); space.m()] }
    }

    pub fn vector_field(&self, space: &JetSpace) -> VectorField {
        let mut v = VectorField::coordinate(space.tau());
        for i in 0..space.m() {
            v = v.with(space.field(i), self.field_rates[i].clone());
            v = v.with(space.momentum(i), self.momentum_rates[i].clone());
        }
        v
    }

    /// `γ ⌋ Ω`.
    pub fn contract(&self, space: &JetSpace, omega: &DifferentialForm) -> DifferentialForm {
        omega.interior(&self.vector_field(space))
    }
}

/// `γ` is Hamiltonian iff `γ ⌋ Ω` is closed.
pub fn hamiltonian_connection_check(space: &JetSpace, gamma: &PhaseConnection, omega: &DifferentialForm) -> bool {
    gamma.contract(space, omega).exterior_derivative().is_zero()
}
