//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits non-zero if any fails.

mod common;

use std::fs;
use std::path::Path;
use std::time::Instant;

use homfield::bundles::{compose_connection, is_reducible, pullback_connection};
use homfield::driver::{cmd_derive, derive, load_model, ReportFormat};
use homfield::evolve::{integrate, monitor_energy, Method, OdeSystem};
use homfield::gravity::{check_energy_conservation, formal_gravity_hamiltonian, initial_momenta, scalar_curvature, MetricAnsatz};
use homfield::hamilton::{
    conservation_residual, el_hamilton_residual, hamiltonian_connection, hamiltonian_form, legendre, liouville_form,
    polysymplectic_form, restrict_to_gauge, HamiltonianSystem, LagrangianModel,
};
use homfield::jetcalc::{euler_lagrange, prolong, Direction, JetSpace, MultiIndex};
use homfield::model::parse_model;
use homfield::symexpr::{bind, differentiate, equivalent, eval_numeric, parse_expr, simplify, Env, Expr};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn root() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn space(base: &[&str], fields: &[&str], order: u32) -> JetSpace {
    JetSpace::new(base, "tau", fields, order).unwrap()
}

fn hamiltonian(s: &JetSpace, h: &str) -> HamiltonianSystem {
    HamiltonianSystem::new(s.clone(), parse_expr(h, s).unwrap()).unwrap()
}

fn contact_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = common::rng(1);
    let mut checks = 0;
    for k in 0..25 {
        let n = 1 + k % 2;
        let s = space(&["x", "z"][..n], &["y"], 2);
        let mut base: Vec<Expr> = s.base_coords().iter().map(Expr::sym).collect();
        base.push(Expr::sym(s.tau()));
        let section = bind(s.field(0), common::random_polynomial(&mut rng, &base, 4, 0.5));
        let j = prolong(&s, &section, 2).unwrap();
        let mut atoms = vec![Expr::sym(s.field(0))];
        for d in s.directions() {
            atoms.push(Expr::sym(&s.jet_along(0, &[d])));
            atoms.push(Expr::sym(s.direction_symbol(d)));
        }
        let e = common::random_polynomial(&mut rng, &atoms, 3, 0.2);
        for d in s.directions() {
            let lhs = j.apply(&s.total_derivative(&e, d));
            let rhs = differentiate(&j.apply(&e), s.direction_symbol(d));
            let r = simplify(&(lhs - rhs));
            ensure(r.is_literal_zero(), format!("section {k}: residual {r}"))?;
            checks += 1;
        }
        for order in 0..2 {
            for alpha in MultiIndex::all_of_order(n, order) {
                ensure(j.pullback(&s.contact_form(0, &alpha)).is_zero(), format!("section {k}: contact form survives"))?;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 10.0, format!("took {secs:.1} s"))?;
    Ok(format!("25 sections, {checks} literal-zero residuals, contact forms vanish, {secs:.2} s"))
}

fn composite_connection_suite() -> Outcome {
    let mut rng = common::rng(2);
    let mut min_gap = f64::INFINITY;
    for k in 0..10 {
        let reducible = k % 2 == 0;
        let (s, theta, gamma, h) = common::connection_triple(&mut rng, reducible);
        ensure(is_reducible(&s, &gamma, &h) == reducible, format!("triple {k}: reducibility misjudged"))?;
        let restricted = compose_connection(&theta, &gamma).restrict(&s, &h);
        let pulled = pullback_connection(&s, &theta, &h);
        for l in 0..s.n() {
            let delta = simplify(&(restricted[0][l].clone() - pulled.get(0, l)));
            if reducible {
                ensure(delta.is_literal_zero(), format!("triple {k}: Δ = {delta}"))?;
            } else {
                let env = common::random_point(&mut rng, &[&delta], -1.0, 1.0);
                let v = eval_numeric(&delta, &env).map_err(|e| e.to_string())?.abs();
                ensure(v > 1e-6, format!("triple {k}: |Δ| = {v:e}"))?;
                min_gap = min_gap.min(v);
            }
        }
    }
    Ok(format!("5 reducible triples restrict exactly, 5 others differ (min |Δ| = {min_gap:.3})"))
}

fn polysymplectic_suite() -> Outcome {
    for fields in [&["y"][..], &["u", "v"], &["a", "b", "c"]] {
        let sys = hamiltonian(&space(&["x"], fields, 1), "0");
        let omega = polysymplectic_form(&sys);
        ensure(liouville_form(&sys).exterior_derivative().equals(&omega), "dϑ ≠ Ω")?;
        ensure(omega.exterior_derivative().is_zero(), "dΩ ≠ 0")?;
    }
    let cases = [
        (&[][..], &["y"][..], "1/2*p(y)^2 + 1/2*y^2"),
        (&["x"], &["y"], "1/2*p(y)^2*(1 + tau) + x*y^3"),
        (&[], &["y"], "1/2*p(y)^2 - cos(y)"),
        (&[], &["a"], "-p(a)^2/(24*a)"),
        (&["x", "z"], &["u", "v"], "p(u)*p(v) + u*v*tau - sin(u)"),
    ];
    for (base, fields, h) in cases {
        let sys = hamiltonian(&space(base, fields, 1), h);
        let lhs = hamiltonian_connection(&sys).contract(sys.space(), &polysymplectic_form(&sys));
        ensure(lhs.equals(&hamiltonian_form(&sys).exterior_derivative()), format!("γ_H⌋Ω ≠ dH for {h}"))?;
    }
    Ok("dϑ = Ω and dΩ = 0 for 1-3 fields; γ_H⌋Ω = dH for 5 Hamiltonians".into())
}

fn el_hamilton_suite() -> Outcome {
    let mut worst: f64 = 0.0;
    for l in ["1/2*d(y, tau)^2", "1/2*d(y, tau)^2 - 1/2*y^2", "1/2*d(y, tau)^2 - 1/4*y^4", "1/2*(1 + tau^2)*d(y, tau)^2"] {
        let s = space(&[], &["y"], 2);
        let model = LagrangianModel::new(s.clone(), parse_expr(l, &s).unwrap()).map_err(|e| e.to_string())?;
        let sys = legendre(&model).map_err(|e| e.to_string())?;
        for r in el_hamilton_residual(&model, &sys).map_err(|e| e.to_string())? {
            ensure(r.is_literal_zero(), format!("{l}: residual {r}"))?;
        }
        let h_side = OdeSystem::from_hamiltonian(&sys, &Env::new()).map_err(|e| e.to_string())?;
        let l_side = OdeSystem::from_lagrangian(&model, &Env::new()).map_err(|e| e.to_string())?;
        let (y0, v0) = (1.0, 0.5);
        let mut env = Env::new();
        env.insert(s.field(0).clone(), y0);
        env.insert(s.velocity(0), v0);
        env.insert(s.tau().clone(), 0.0);
        let p0 = eval_numeric(&sys.legendre_data().unwrap().momenta[0], &env).unwrap();
        let th = integrate(&h_side, &[y0, p0], 0.0, 10.0, Method::Rk4, 1e-3).map_err(|e| e.to_string())?;
        let tl = integrate(&l_side, &[y0, v0], 0.0, 10.0, Method::Rk4, 1e-3).map_err(|e| e.to_string())?;
        for (a, b) in th.states().iter().zip(tl.states()) {
            worst = worst.max((a[0] - b[0]).abs());
        }
    }
    ensure(worst <= 1e-8, format!("max |y_H - y_L| = {worst:e}"))?;
    Ok(format!("4 Lagrangians: EL on Hamilton solutions = 0; max |y_H - y_L| = {worst:.1e} over [0, 10]"))
}

/// `max |Δ𝓗/Δτ − ∂_τ𝓗|` for an rk4 run with step `h`.
fn monitor_error(sys: &OdeSystem, h: f64) -> f64 {
    let t = integrate(sys, &[0.7, 1.1], 0.0, 1.0, Method::Rk4, h).unwrap();
    monitor_energy(&t, sys).unwrap().max_monitor_error
}

fn conservation_suite() -> Outcome {
    let s = space(&[], &["y"], 1);
    let autonomous = ["1/2*p(y)^2 + 1/2*y^2", "1/2*p(y)^2 + 1/4*y^4", "1/2*p(y)^2 - cos(y)", "-p(y)^2/(24*y)"];
    let explicit = ["1/2*p(y)^2*(1 + tau)", "1/2*p(y)^2*(1 + tau) + 1/2*y^2", "1/2*p(y)^2 + tau*y"];
    for h in autonomous.iter().chain(&explicit) {
        ensure(conservation_residual(&hamiltonian(&s, h)).is_literal_zero(), format!("bracket residual for {h}"))?;
    }
    let mut worst: f64 = 0.0;
    for h in autonomous {
        let ode = OdeSystem::from_hamiltonian(&hamiltonian(&s, h), &Env::new()).unwrap();
        let x0 = if h.contains("24") { [1.0, -12.0] } else { [0.8, 0.3] };
        let t = integrate(&ode, &x0, 0.0, 10.0, Method::ImplicitMidpoint, 1e-3).map_err(|e| e.to_string())?;
        ensure(t.steps == 10_000, "step count")?;
        worst = worst.max(monitor_energy(&t, &ode).unwrap().max_rel_drift);
    }
    ensure(worst <= 1e-6, format!("relative drift {worst:e}"))?;
    // 𝓗 = ½p̄²(1+τ) keeps p̄ fixed, so 𝓗 is linear in τ along solutions and the
    // central difference is exact: only round-off remains
    let linear = OdeSystem::from_hamiltonian(&hamiltonian(&s, explicit[0]), &Env::new()).unwrap();
    let (e1, e2) = (monitor_error(&linear, 0.01), monitor_error(&linear, 0.005));
    ensure(e1.max(e2) < 1e-9, format!("½p̄²(1+τ): monitor error {e1:e}, {e2:e}"))?;
    let perturbed = OdeSystem::from_hamiltonian(&hamiltonian(&s, explicit[1]), &Env::new()).unwrap();
    let (f1, f2) = (monitor_error(&perturbed, 0.01), monitor_error(&perturbed, 0.005));
    let order = (f1 / f2).log2();
    ensure(order >= 1.9, format!("observed order {order:.2}"))?;
    Ok(format!(
        "bracket identity for 7 Hamiltonians; midpoint 10^4 steps rel drift {worst:.1e}; ½p̄²(1+τ) exact to round-off ({e1:.1e}); with +½y² observed order {order:.2}"
    ))
}

fn gauge_suite() -> Outcome {
    let text = fs::read_to_string(root().join("tests/corpus/valid/time_mechanics.model")).unwrap();
    let model = load_model(&text).map_err(|e| e.to_string())?;
    let report = cmd_derive(&model, ReportFormat::Text).map_err(|e| e.to_string())?;
    let golden = fs::read_to_string(root().join("tests/golden/time_mechanics.txt")).unwrap();
    let body: String = report.lines().skip(1).map(|l| format!("{l}\n")).collect();
    ensure(body == golden, "time mechanics report differs from golden file")?;
    // Hamilton's equations in t, written out by hand
    for line in ["reduced: d(y, t) = p(y)", "reduced: d(p(y), t) = -k*y"] {
        ensure(report.contains(line), format!("missing `{line}`"))?;
    }
    let text = fs::read_to_string(root().join("tests/corpus/valid/scalar_field.model")).unwrap();
    let d = derive(&load_model(&text).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let g = restrict_to_gauge(&d.system, &parse_expr("t", d.system.space()).unwrap(), None).map_err(|e| e.to_string())?;
    let s = d.system.space();
    // De Donder–Weyl for ½p̄² + ½u_x² + ½m²u² along t: ∂_t u = p̄, ∂_t p̄ = u_xx − m²u
    let hand = [parse_expr("p(u)", s).unwrap(), parse_expr("d(u, x, x) - m^2*u", s).unwrap()];
    for (eq, h) in g.equations.iter().zip(&hand) {
        ensure(simplify(&(eq.rhs.clone() - h.clone())).is_literal_zero(), format!("{} = {}", eq.lhs, eq.rhs))?;
    }
    Ok("time mechanics with h = t matches golden Hamilton equations; 1+1 scalar field matches hand-derived equations".into())
}

fn curvature_suite() -> Outcome {
    let start = Instant::now();
    ensure(scalar_curvature(&MetricAnsatz::minkowski()).unwrap().is_literal_zero(), "Minkowski r ≠ 0")?;
    let s = space(&["rho", "phi"], &[], 1);
    let polar = MetricAnsatz::new(
        "polar",
        s.clone(),
        vec![Direction::Tau, Direction::Base(0), Direction::Base(1)],
        vec![Expr::int(-1), Expr::one(), parse_expr("rho^2", &s).unwrap()],
    )
    .unwrap();
    ensure(scalar_curvature(&polar).unwrap().is_literal_zero(), "polar flat r ≠ 0")?;
    let sphere = MetricAnsatz::sphere();
    let r = scalar_curvature(&sphere).unwrap();
    ensure(equivalent(&r, &parse_expr("2/a^2", sphere.space()).unwrap()), format!("sphere r = {r}"))?;
    let frw = MetricAnsatz::frw();
    let r = scalar_curvature(&frw).unwrap();
    let oracle = parse_expr("6*(d(a, tau, tau)/a + (d(a, tau)/a)^2)", frw.space()).unwrap();
    ensure(equivalent(&r, &oracle), format!("FRW r = {r}"))?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 30.0, format!("took {secs:.1} s"))?;
    Ok(format!("flat r = 0, sphere r = 2/a^2, FRW r = 6(ä/a + (ȧ/a)^2), {secs:.2} s"))
}

fn frw_suite() -> Outcome {
    let d = formal_gravity_hamiltonian(&MetricAnsatz::frw()).map_err(|e| e.to_string())?;
    let s = d.system.space();
    ensure(equivalent(&d.reduced_lagrangian, &parse_expr("-6*a*d(a, tau)^2", s).unwrap()), "reduced L")?;
    let hand = parse_expr("-p(a)^2/(24*a)", s).unwrap();
    ensure(equivalent(d.system.hamiltonian(), &hand), format!("𝓗 = {}", d.system.hamiltonian()))?;
    let el = euler_lagrange(s, &d.reduced_lagrangian, 0).map_err(|e| e.to_string())?;
    let friedmann = parse_expr("6*a^2*(2*d(a, tau, tau)/a + (d(a, tau)/a)^2)", s).unwrap();
    ensure(equivalent(&el, &friedmann), format!("EL = {el}"))?;
    let p0 = initial_momenta(&d, &[1.0], &[1.0]).map_err(|e| e.to_string())?;
    let rep = check_energy_conservation(&d.system, &[1.0, p0[0]], 0.0, 1.0, Method::ImplicitMidpoint, 1e-4, 1, 1e-6)
        .map_err(|e| e.to_string())?;
    ensure(rep.passed, format!("relative drift {:e}", rep.drift.max_rel_drift))?;
    Ok(format!(
        "𝓗 = -p_a^2/(24a) (same sign convention as the hand oracle); EL = 6a^2(2ä/a + (ȧ/a)^2); rel drift {:.1e}",
        rep.drift.max_rel_drift
    ))
}

fn integrator_suite() -> Outcome {
    let s = space(&[], &["y"], 1);
    let osc = OdeSystem::from_hamiltonian(&hamiltonian(&s, "1/2*p(y)^2 + 1/2*y^2"), &Env::new()).unwrap();
    let err = |h: f64| {
        let t = integrate(&osc, &[1.0, 0.0], 0.0, 2.0, Method::Rk4, h).unwrap();
        let x = t.final_state();
        ((x[0] - 2f64.cos()).powi(2) + (x[1] + 2f64.sin()).powi(2)).sqrt()
    };
    let ratio = err(0.1) / err(0.05);
    ensure(ratio >= 14.0, format!("rk4 error ratio {ratio:.2}"))?;
    let pend = OdeSystem::from_hamiltonian(&hamiltonian(&s, "1/2*p(y)^2 - cos(y)"), &Env::new()).unwrap();
    let t = integrate(&pend, &[1.0, 0.5], 0.0, 1000.0, Method::ImplicitMidpoint, 0.01).map_err(|e| e.to_string())?;
    ensure(t.steps == 100_000, "step count")?;
    let e = t.energies();
    let dev: Vec<f64> = e.iter().map(|v| v - e[0]).collect();
    let half = dev.len() / 2;
    let first = dev[..half].iter().fold(0f64, |m, v| m.max(v.abs()));
    let second = dev[half..].iter().fold(0f64, |m, v| m.max(v.abs()));
    let ups = dev.windows(2).filter(|w| w[1] > w[0]).count();
    let downs = dev.windows(2).filter(|w| w[1] < w[0]).count();
    ensure(second <= 1.5 * first, format!("drift grows: {first:e} then {second:e}"))?;
    ensure(ups > 1000 && downs > 1000, "energy error is monotone")?;
    Ok(format!(
        "rk4 error ratio {ratio:.2}; midpoint 10^5 steps max |ΔH| {first:.1e} / {second:.1e} (first / second half), {ups} rises, {downs} falls"
    ))
}

fn parser_suite() -> Outcome {
    let mut valid = 0;
    for entry in fs::read_dir(root().join("tests/corpus/valid")).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        let m = parse_model(&text).map_err(|e| format!("{}: {e:?}", path.display()))?;
        let again = parse_model(&m.to_string()).map_err(|e| format!("{}: {e:?}", path.display()))?;
        ensure(m == again, format!("{} does not round-trip", path.display()))?;
        valid += 1;
    }
    let mut invalid = 0;
    for entry in fs::read_dir(root().join("tests/corpus/invalid")).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        let want = text.lines().next().and_then(|l| l.strip_prefix("# expect ")).unwrap().to_string();
        match parse_model(&text) {
            Ok(_) => return Err(format!("{} accepted", path.display())),
            Err(e) => ensure(format!("{}:{}", e.line, e.col) == want, format!("{}: got {}:{}", path.display(), e.line, e.col))?,
        }
        invalid += 1;
    }
    ensure(invalid == 10, format!("{invalid} negative files"))?;
    Ok(format!("{valid} corpus files round-trip; {invalid} negative files rejected at the recorded line:column"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("contact and total-derivative suite", contact_suite),
        ("composite-connection reducibility", composite_connection_suite),
        ("polysymplectic identities", polysymplectic_suite),
        ("Euler-Lagrange and Hamilton equivalence", el_hamilton_suite),
        ("energy conservation law", conservation_suite),
        ("gauge reduction", gauge_suite),
        ("curvature oracles", curvature_suite),
        ("formal gravitational energy", frw_suite),
        ("integrator orders", integrator_suite),
        ("parser corpus", parser_suite),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {}/10 criteria pass", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
