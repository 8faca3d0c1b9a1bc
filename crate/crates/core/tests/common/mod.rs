#![allow(dead_code)]

use homfield::symexpr::{Env, Expr};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All monomials in `atoms` of total degree at most `degree`.
pub fn monomials(atoms: &[Expr], degree: u32) -> Vec<Expr> {
    let mut out = vec![Expr::one()];
    let mut frontier = vec![(Expr::one(), 0usize)];
    for _ in 0..degree {
        let mut next = Vec::new();
        for (m, start) in &frontier {
            for (k, a) in atoms.iter().enumerate().skip(*start) {
                let mk = m.clone() * a.clone();
                out.push(mk.clone());
                next.push((mk, k));
            }
        }
        frontier = next;
    }
    out
}

/// `Σ c_k m_k` over the monomials, skipping zero coefficients.
pub fn polynomial(atoms: &[Expr], degree: u32, coeffs: &[i64]) -> Expr {
    let terms = monomials(atoms, degree)
        .into_iter()
        .zip(coeffs.iter().chain(std::iter::repeat(&0)))
        .filter(|(_, c)| **c != 0)
        .map(|(m, c)| Expr::int(*c) * m)
        .collect();
    Expr::sum(terms)
}

/// A sparse random polynomial with small integer coefficients.
pub fn random_polynomial(rng: &mut ChaCha8Rng, atoms: &[Expr], degree: u32, density: f64) -> Expr {
    let count = monomials(atoms, degree).len();
    let coeffs: Vec<i64> =
        (0..count).map(|_| if rng.gen_bool(density) { rng.gen_range(-4..=4) } else { 0 }).collect();
    polynomial(atoms, degree, &coeffs)
}

/// A point with every symbol of `e` drawn from `[lo, hi]`.
pub fn random_point(rng: &mut ChaCha8Rng, exprs: &[&Expr], lo: f64, hi: f64) -> Env {
    let mut env = Env::new();
    for e in exprs {
        for s in e.symbols() {
            env.entry(s).or_insert_with(|| rng.gen_range(lo..hi));
        }
    }
    env
}

use homfield::bundles::{ConnectionGamma, ConnectionTheta};
use homfield::jetcalc::JetSpace;

/// A connection pair `(γ_Θ, Γ)` and a section `h` on `x, z`. When
/// `reducible`, `Γ_λ = ∂_λh + (τ − h) r_λ`, which makes `h` integral;
/// otherwise a nowhere-vanishing `1 + x²` is added to each `Γ_λ`.
pub fn connection_triple(
    rng: &mut ChaCha8Rng,
    reducible: bool,
) -> (JetSpace, ConnectionTheta, ConnectionGamma, Expr) {
    use homfield::symexpr::differentiate;
    let space = JetSpace::new(&["x", "z"], "tau", &["y"], 1).unwrap();
    let x = Expr::sym(space.base(0));
    let z = Expr::sym(space.base(1));
    let tau = Expr::sym(space.tau());
    let y = Expr::sym(space.field(0));
    let h = random_polynomial(rng, &[x.clone(), z.clone()], 2, 0.6);
    let full = [x.clone(), z.clone(), tau.clone(), y.clone()];
    let base = vec![(0..2).map(|_| random_polynomial(rng, &full, 2, 0.4)).collect()];
    let a_tau = Expr::one() + y.clone().powi(2) + x.clone().powi(2) + random_polynomial(rng, std::slice::from_ref(&z), 1, 0.5).powi(2);
    let theta = ConnectionTheta::new(&space, base, vec![a_tau]).unwrap();
    let gamma: Vec<Expr> = (0..2)
        .map(|l| {
            let r = random_polynomial(rng, &[x.clone(), z.clone(), tau.clone()], 1, 0.7);
            let g = differentiate(&h, space.base(l)) + (tau.clone() - h.clone()) * r;
            if reducible {
                g
            } else {
                g + Expr::one() + x.clone().powi(2)
            }
        })
        .collect();
    let gamma = ConnectionGamma::new(&space, gamma).unwrap();
    (space, theta, gamma, h)
}
