use num_traits::Signed;

use crate::symexpr::{rat, simplify, Expr, Node};

use super::{GravityError, MetricAnsatz};

/// Levi-Civita symbols `Γ^λ_{μν}`.
#[derive(Clone, Debug)]
pub struct Christoffel {
    symbols: Vec<Vec<Vec<Expr>>>,
}

impl Christoffel {
    pub fn get(&self, lambda: usize, mu: usize, nu: usize) -> &Expr {
        &self.symbols[lambda][mu][nu]
    }

    pub fn dim(&self) -> usize {
        self.symbols.len()
    }
}

/// `Γ^λ_{μν} = ½ g^{λλ} (∂_μ g_{λν} + ∂_ν g_{λμ} − ∂_λ g_{μν})`.
pub fn christoffel(g: &MetricAnsatz) -> Result<Christoffel, GravityError> {
    let d = g.dim();
    // ∂_ρ g_μμ, the only non-zero metric derivatives of a diagonal metric
    let dg: Vec<Vec<Expr>> = (0..d).map(|rho| (0..d).map(|mu| g.partial(g.component(mu), rho)).collect()).collect();
    let dg_full = |rho: usize, mu: usize, nu: usize| if mu == nu { dg[rho][mu].clone() } else { Expr::zero() };
    let mut symbols = vec![vec![vec![Expr::zero(); d]; d]; d];
    for (l, sym_l) in symbols.iter_mut().enumerate() {
        let inv = g.inverse(l);
        for mu in 0..d {
            for nu in mu..d {
                let sum = dg_full(mu, l, nu) + dg_full(nu, l, mu) - dg_full(l, mu, nu);
                let value = simplify(&(Expr::rational(1, 2) * inv.clone() * sum));
                sym_l[mu][nu] = value.clone();
                sym_l[nu][mu] = value;
            }
        }
    }
    Ok(Christoffel { symbols })
}

/// `R_{μν} = ∂_λΓ^λ_{μν} − ∂_νΓ^λ_{μλ} + Γ^λ_{λρ}Γ^ρ_{μν} − Γ^λ_{νρ}Γ^ρ_{μλ}`.
pub fn ricci(g: &MetricAnsatz) -> Result<Vec<Vec<Expr>>, GravityError> {
    let c = christoffel(g)?;
    let d = g.dim();
    let mut out = vec![vec![Expr::zero(); d]; d];
    for mu in 0..d {
        for nu in 0..d {
            let mut terms = Vec::new();
            for l in 0..d {
                terms.push(g.partial(c.get(l, mu, nu), l));
                terms.push(-g.partial(c.get(l, mu, l), nu));
                for rho in 0..d {
                    terms.push(c.get(l, l, rho).clone() * c.get(rho, mu, nu));
                    terms.push(-(c.get(l, nu, rho).clone() * c.get(rho, mu, l)));
                }
            }
            out[mu][nu] = simplify(&Expr::sum(terms));
        }
    }
    Ok(out)
}

/// `r = g^{μν} R_{μν}`.
pub fn scalar_curvature(g: &MetricAnsatz) -> Result<Expr, GravityError> {
    let r = ricci(g)?;
    Ok(simplify(&Expr::sum((0..g.dim()).map(|mu| g.inverse(mu) * r[mu][mu].clone()).collect())))
}

fn abs_assuming_sign(e: &Expr) -> Expr {
    let negative = match e.node() {
        Node::Number(q) => q.is_negative(),
        Node::Product(fs) => fs.first().and_then(Expr::as_number).is_some_and(|q| q.is_negative()),
        _ => false,
    };
    if negative {
        simplify(&-e.clone())
    } else {
        e.clone()
    }
}

/// Square root taken factor by factor, assuming every factor is positive.
fn sqrt_positive(e: &Expr) -> Expr {
    let out = match e.node() {
        Node::Power(b, k) => b.pow(k / rat(2, 1)),
        Node::Product(fs) => Expr::product(fs.iter().map(sqrt_positive).collect()),
        _ => e.sqrt(),
    };
    simplify(&out)
}

/// `√|det g|`, with the scale factors and `sin θ` assumed positive.
pub fn sqrt_abs_det(g: &MetricAnsatz) -> Expr {
    simplify(&Expr::product((0..g.dim()).map(|mu| sqrt_positive(&abs_assuming_sign(g.component(mu)))).collect()))
}

/// `L_HE = r √|det g|`.
pub fn he_lagrangian(g: &MetricAnsatz) -> Result<Expr, GravityError> {
    Ok(simplify(&(scalar_curvature(g)? * sqrt_abs_det(g))))
}

/// `∇^μ G_{μν}` with `G = R − ½ g r`; vanishes by the contracted Bianchi
/// identity.
pub fn einstein_divergence(g: &MetricAnsatz) -> Result<Vec<Expr>, GravityError> {
    let d = g.dim();
    let c = christoffel(g)?;
    let r = ricci(g)?;
    let s = scalar_curvature(g)?;
    let einstein: Vec<Vec<Expr>> = (0..d)
        .map(|mu| (0..d).map(|nu| simplify(&(r[mu][nu].clone() - Expr::rational(1, 2) * g.g(mu, nu) * s.clone()))).collect())
        .collect();
    let mut out = Vec::with_capacity(d);
    for nu in 0..d {
        let mut terms = Vec::new();
        for mu in 0..d {
            let mut cov = vec![g.partial(&einstein[mu][nu], mu)];
            for rho in 0..d {
                cov.push(-(c.get(rho, mu, mu).clone() * einstein[rho][nu].clone()));
                cov.push(-(c.get(rho, mu, nu).clone() * einstein[mu][rho].clone()));
            }
            terms.push(g.inverse(mu) * Expr::sum(cov));
        }
        out.push(simplify(&Expr::sum(terms)));
    }
    Ok(out)
}
