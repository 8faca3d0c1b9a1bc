use proptest::prelude::*;

use super::*;

fn table() -> SymbolTable {
    SymbolTable::with_parameters(&["a", "b", "c", "k", "x", "y"])
}

fn p(s: &str) -> Expr {
    parse_expr(s, &table()).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn sym(name: &str) -> Symbol {
    table().get(name).unwrap().clone()
}

fn env(pairs: &[(&str, f64)]) -> Env {
    pairs.iter().map(|(n, v)| (sym(n), *v)).collect()
}

#[test]
fn ring_axioms() {
    assert_eq!(p("x + x"), Expr::int(2) * p("x"));
    assert_eq!(p("x + x").to_string(), "2*x");
    assert_eq!(p("x * x^(-1)"), Expr::one());
    assert!(is_zero(&p("(a+b)^2 - a^2 - 2*a*b - b^2")));
    assert!(is_zero(&p("(a+b)^3 - (a+b)*(a+b)^2")));
}

#[test]
fn rational_cancellation() {
    assert!(equivalent(&p("(x^2 - 1)/(x - 1)"), &p("x + 1")));
    assert!(equivalent(&p("1/x + 1/y"), &p("(x + y)/(x*y)")));
    assert!(equivalent(&p("a/(2*a)"), &Expr::rational(1, 2)));
    assert!(equivalent(&p("sqrt(x)*sqrt(x)"), &p("x")));
}

#[test]
fn function_rules() {
    assert_eq!(p("sin(0)"), Expr::zero());
    assert_eq!(p("cos(0)"), Expr::one());
    assert_eq!(p("exp(ln(x))"), p("x"));
    assert!(equivalent(&p("sin(-x)"), &p("-sin(x)")));
    assert!(equivalent(&p("cos(-x)"), &p("cos(x)")));
}

#[test]
fn derivative_examples() {
    let x = sym("x");
    assert!(equivalent(&differentiate(&p("x^3"), &x), &p("3*x^2")));
    assert!(equivalent(&differentiate(&p("sin(k*x)"), &x), &p("k*cos(k*x)")));
    assert!(equivalent(&differentiate(&p("ln(x)"), &x), &p("1/x")));
    assert!(equivalent(&differentiate(&p("sqrt(x)"), &x), &p("1/(2*sqrt(x))")));
    assert!(differentiate(&p("y^2"), &x).is_literal_zero());
}

#[test]
fn derivative_matches_finite_difference() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let e = p("sin(k*x)");
    let d = differentiate(&e, &sym("x"));
    for _ in 0..10 {
        let k: f64 = rng.gen_range(0.5..3.0);
        let x0: f64 = rng.gen_range(-2.0..2.0);
        let h = 1e-5;
        let f = |x: f64| eval_numeric(&e, &env(&[("k", k), ("x", x)])).unwrap();
        let fd = (f(x0 + h) - f(x0 - h)) / (2.0 * h);
        let exact = eval_numeric(&d, &env(&[("k", k), ("x", x0)])).unwrap();
        assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0), "{fd} vs {exact}");
        assert!((exact - k * (k * x0).cos()).abs() < 1e-12);
    }
}

#[test]
fn substitution_is_simultaneous() {
    let (x, y) = (sym("x"), sym("y"));
    let mut b = Bindings::new();
    b.insert(x.clone(), Expr::int(1));
    b.insert(y.clone(), Expr::int(2));
    assert_eq!(substitute(&p("x + y"), &b), Expr::int(3));
    let mut swap = Bindings::new();
    swap.insert(x.clone(), Expr::sym(&y));
    swap.insert(y.clone(), Expr::sym(&x));
    assert_eq!(substitute(&p("x*y"), &swap), p("x*y"));
    assert_eq!(substitute(&p("x^2*y"), &swap), p("y^2*x"));
    assert!(matches!(resolve_bindings(&swap), Err(SymbolError::CyclicBinding(_))));
    let mut chain = Bindings::new();
    chain.insert(x.clone(), p("y + 1"));
    chain.insert(y, p("a"));
    assert_eq!(substitute_nested(&p("x"), &chain).unwrap(), p("a + 1"));
}

#[test]
fn evaluation_errors() {
    assert_eq!(eval_numeric(&p("x^2"), &env(&[("x", 3.0)])).unwrap(), 9.0);
    assert!(matches!(eval_numeric(&p("sqrt(x)"), &env(&[("x", -1.0)])), Err(SymbolError::DomainError(_))));
    assert!(matches!(eval_numeric(&p("ln(x)"), &env(&[("x", 0.0)])), Err(SymbolError::DomainError(_))));
    assert!(matches!(eval_numeric(&p("x + y"), &env(&[("x", 1.0)])), Err(SymbolError::UnboundSymbol(_))));
}

#[test]
fn compiled_matches_interpreted() {
    let e = p("a*x^2 + sin(b*x)/(1 + c^2) - exp(-x)");
    let slots: Vec<Symbol> = ["a", "b", "c", "x"].iter().map(|n| sym(n)).collect();
    let compiled = CompiledExpr::compile(&e, &slots).unwrap();
    let vals = [1.5, -0.25, 2.0, 0.75];
    let interp = eval_numeric(&e, &slots.iter().cloned().zip(vals).collect()).unwrap();
    assert!((compiled.eval(&vals).unwrap() - interp).abs() < 1e-14);
}

#[test]
fn parse_errors_are_located() {
    let err = parse_expr("(x +\n  z)", &table()).unwrap_err();
    assert_eq!((err.line, err.col), (2, 3));
    assert_eq!(err.kind, ParseErrorKind::UndeclaredSymbol("z".into()));
    let err = parse_expr("(x + 1", &table()).unwrap_err();
    assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
    assert!(parse_expr("x^y", &table()).is_err());
}

#[test]
fn printing_examples() {
    assert_eq!(p("-x").to_string(), "-x");
    assert_eq!(p("sqrt(a)").to_string(), "sqrt(a)");
    for s in ["a/(b*c)", "x^(1/3)", "(a + b)^(-1/2)", "1 - x", "2/3*x^2*y", "sin(x)^2 + cos(x)^2"] {
        let e = p(s);
        assert_eq!(p(&e.to_string()), e, "{s} printed as {e}");
    }
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (-4i64..5).prop_map(Expr::int),
        (1i64..5, 2i64..4).prop_map(|(n, d)| Expr::rational(n, d)),
        prop::sample::select(vec!["a", "b", "c", "x", "y"]).prop_map(|n| Expr::sym(&sym(n))),
    ];
    leaf.prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::sum),
            prop::collection::vec(inner.clone(), 2..3).prop_map(Expr::product),
            (inner.clone(), 0i64..4).prop_map(|(b, k)| b.powi(k)),
            inner.clone().prop_map(|e| e.sin()),
            inner.prop_map(|e| e.cos()),
        ]
    })
}

fn arb_env() -> impl Strategy<Value = Env> {
    prop::collection::vec(-2.0f64..2.0, 5).prop_map(|v| {
        ["a", "b", "c", "x", "y"].iter().zip(v).map(|(n, x)| (sym(n), x)).collect()
    })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn simplify_is_idempotent(e in arb_expr()) {
        let s = simplify(&e);
        prop_assert_eq!(simplify(&s), s);
    }

    #[test]
    fn simplify_preserves_value(e in arb_expr(), env in arb_env()) {
        let raw = eval_numeric(&e, &env).unwrap();
        let canon = eval_numeric(&simplify(&e), &env).unwrap();
        prop_assert!(close(raw, canon, 1e-9), "{} vs {}", raw, canon);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in arb_expr(), b in arb_expr(), env in arb_env()) {
        let (va, vb) = (eval_numeric(&a, &env).unwrap(), eval_numeric(&b, &env).unwrap());
        let sum = eval_numeric(&simplify(&(a.clone() + b.clone())), &env).unwrap();
        let prod = eval_numeric(&simplify(&(a * b)), &env).unwrap();
        prop_assert!(close(sum, va + vb, 1e-9));
        prop_assert!(close(prod, va * vb, 1e-9));
    }

    #[test]
    fn leibniz_rule(a in arb_expr(), b in arb_expr()) {
        let x = sym("x");
        let lhs = differentiate(&(a.clone() * b.clone()), &x);
        let rhs = differentiate(&a, &x) * b.clone() + a * differentiate(&b, &x);
        prop_assert!(is_zero(&(lhs - rhs)));
    }

    #[test]
    fn derivative_agrees_with_central_difference(e in arb_expr(), env in arb_env()) {
        let x = sym("x");
        let d = differentiate(&e, &x);
        let x0 = env[&x];
        let h = 1e-5;
        let at = |v: f64| {
            let mut en = env.clone();
            en.insert(x.clone(), v);
            eval_numeric(&e, &en).unwrap()
        };
        let fd = (at(x0 + h) - at(x0 - h)) / (2.0 * h);
        let exact = eval_numeric(&d, &env).unwrap();
        prop_assert!(close(fd, exact, 1e-6), "{} vs {}", fd, exact);
    }

    #[test]
    fn print_parse_round_trip(e in arb_expr()) {
        let s = simplify(&e);
        let text = s.to_string();
        let back = parse_expr(&text, &table()).unwrap();
        prop_assert_eq!(back, s, "{}", text);
    }
}
