mod common;

use homfield::bundles::{
    compose_connection, integrality_defect, is_reducible, pullback_connection, restrict_section,
    vertical_covariant_differential, ConnectionTheta, Splitting,
};
use homfield::jetcalc::JetSpace;
use homfield::symexpr::{bind, eval_numeric, is_zero, simplify, Expr};
use proptest::prelude::*;

#[test]
fn composite_restricts_to_pullback_exactly_for_integral_sections() {
    let mut rng = common::rng(11);
    for k in 0..12 {
        let reducible = k % 2 == 0;
        let (space, theta, gamma, h) = common::connection_triple(&mut rng, reducible);
        assert_eq!(is_reducible(&space, &gamma, &h), reducible);
        let restricted = compose_connection(&theta, &gamma).restrict(&space, &h);
        let pulled = pullback_connection(&space, &theta, &h);
        for l in 0..2 {
            let delta = simplify(&(restricted[0][l].clone() - pulled.get(0, l)));
            // oracle: Δ_λ = A_τ(x, h, y) (Γ_λ(x, h) − ∂_λh)
            let at_h = bind(space.tau(), h.clone());
            let oracle = homfield::symexpr::substitute(theta.tau(0), &at_h) * integrality_defect(&space, &gamma, &h)[l].clone();
            assert!(is_zero(&(delta.clone() + oracle)), "{delta}");
            if reducible {
                assert!(delta.is_literal_zero());
            } else {
                let env = common::random_point(&mut rng, &[&delta], -1.0, 1.0);
                assert!(eval_numeric(&delta, &env).unwrap().abs() > 1e-6);
            }
        }
    }
}

fn space() -> JetSpace {
    JetSpace::new(&["x", "z"], "tau", &["y", "w"], 1).unwrap()
}

fn coeffs(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(prop_oneof![3 => Just(0i64), 1 => -3i64..=3], len)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn two_routes_to_the_covariant_differential(
        ch in coeffs(6), cs in coeffs(20), ca in coeffs(84)
    ) {
        let s = space();
        let (x, z, tau) = (Expr::sym(s.base(0)), Expr::sym(s.base(1)), Expr::sym(s.tau()));
        let h = common::polynomial(&[x.clone(), z.clone()], 2, &ch);
        let xzt = [x.clone(), z.clone(), tau.clone()];
        let section = [
            (s.field(0).clone(), common::polynomial(&xzt, 3, &cs)),
            (s.field(1).clone(), common::polynomial(&xzt, 2, &cs[..10])),
        ].into_iter().collect();
        let mut atoms = xzt.to_vec();
        atoms.extend(s.fields().iter().map(Expr::sym));
        let mut chunks = ca.chunks(21);
        let mut next = || common::polynomial(&atoms, 2, chunks.next().unwrap_or(&[]));
        let theta = ConnectionTheta::new(
            &s,
            vec![vec![next(), next()], vec![next(), Expr::zero()]],
            vec![next(), Expr::one()],
        ).unwrap();
        let direct = vertical_covariant_differential(&s, &theta, &section, &h);
        let via_pullback = pullback_connection(&s, &theta, &h)
            .covariant_differential(&s, &restrict_section(&s, &section, &h));
        for (k, d) in &direct {
            prop_assert!(is_zero(&(d.clone() - via_pullback[k].clone())), "{:?}: {}", k, d);
        }
    }

    #[test]
    fn splitting_projectors_are_complementary(ca in coeffs(42)) {
        let s = space();
        let mut atoms: Vec<Expr> = vec![Expr::sym(s.base(0)), Expr::sym(s.tau())];
        atoms.extend(s.fields().iter().map(Expr::sym));
        let theta = ConnectionTheta::new(
            &s,
            vec![vec![Expr::zero(); 2]; 2],
            vec![common::polynomial(&atoms, 2, &ca[..15]), common::polynomial(&atoms, 2, &ca[15..30])],
        ).unwrap();
        prop_assert!(Splitting::new(&theta).check());
    }
}
