use std::collections::BTreeMap;

use num_rational::BigRational;
use serde_json::json;

use crate::evolve::{integrate_with_stride, monitor_energy, DriftReport, Method, OdeSystem, Trajectory};
use crate::gravity::{check_energy_conservation, formal_gravity_hamiltonian, ConservationReport, GravityDerivation, MetricAnsatz};
use crate::hamilton::HamiltonianSystem;
use crate::model::ModelFile;
use crate::symexpr::lex::parse_decimal;
use crate::symexpr::{eval_numeric, Env};

use super::{derive, DriverError, VERSION};

#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub tau0: f64,
    pub tau1: f64,
    pub step: f64,
    pub method: Method,
    /// Keep every `stride`-th step in the output.
    pub stride: usize,
    /// Initial values by coordinate name: `y`, `p(y)` or `d(y, tau)`.
    pub init: Vec<(String, f64)>,
    /// Relative 𝓗-drift allowed for autonomous systems.
    pub tolerance: Option<f64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            tau0: 0.0,
            tau1: 1.0,
            step: 1e-3,
            method: Method::ImplicitMidpoint,
            stride: 1,
            init: Vec::new(),
            tolerance: None,
        }
    }
}

/// Splits `a=1,d(y, tau)=2` on commas outside parentheses.
pub fn parse_assignments(text: &str) -> Result<Vec<(String, String)>, DriverError> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
        .into_iter()
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (k, v) = p.rsplit_once('=').ok_or_else(|| DriverError::Usage(format!("expected NAME=VALUE, got `{p}`")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

/// `(y, p̄)` at `τ₀`. Velocities are mapped to momenta through the Legendre
/// map; unset coordinates take `default_q` and zero momentum.
fn initial_state(
    sys: &HamiltonianSystem,
    params: &Env,
    tau0: f64,
    init: &[(String, f64)],
    default_q: f64,
) -> Result<Vec<f64>, DriverError> {
    let s = sys.space();
    let m = s.m();
    let mut q = vec![default_q; m];
    let mut qdot = vec![0.0; m];
    let mut p: Vec<Option<f64>> = vec![None; m];
    let mut any_velocity = false;
    for (name, v) in init {
        if let Some(i) = s.field_index(name) {
            q[i] = *v;
        } else if let Some(i) = s.momenta().iter().position(|x| x.name() == name) {
            p[i] = Some(*v);
        } else if let Some(i) = (0..m).find(|&i| s.velocity(i).name() == name) {
            qdot[i] = *v;
            any_velocity = true;
        } else {
            return Err(DriverError::Usage(format!("`{name}` is not a field, momentum or velocity of the model")));
        }
    }
    let mut state = q.clone();
    if any_velocity {
        let data = sys
            .legendre_data()
            .ok_or_else(|| DriverError::Usage("velocities can only be given for Lagrangian models".into()))?;
        let mut env = params.clone();
        env.insert(s.tau().clone(), tau0);
        for i in 0..m {
            env.insert(s.field(i).clone(), q[i]);
            env.insert(s.velocity(i), qdot[i]);
        }
        for i in 0..m {
            if p[i].is_none() {
                let v = eval_numeric(&data.momenta[i], &env).map_err(|e| DriverError::Numeric(e.to_string()))?;
                p[i] = Some(v);
            }
        }
    }
    state.extend(p.into_iter().map(|x| x.unwrap_or(0.0)));
    Ok(state)
}

#[derive(Clone, Debug)]
pub struct SimulationOutput {
    pub model: String,
    pub trajectory: Trajectory,
    pub drift: DriftReport,
    pub autonomous: bool,
    /// `None` when no tolerance applies.
    pub passed: Option<bool>,
    pub tolerance: Option<f64>,
}

impl SimulationOutput {
    pub fn csv(&self) -> String {
        self.trajectory.to_csv()
    }

    pub fn summary(&self) -> String {
        let d = &self.drift;
        let t = &self.trajectory;
        let mut out = format!("# homfield {VERSION} simulate\nmodel: {}\n", self.model);
        out.push_str(&format!("method: {}\nstep: {:e}\nsteps: {}\n", t.method, t.step, t.steps));
        out.push_str(&format!("initial H: {:.16e}\n", d.initial_energy));
        out.push_str(&format!("max |H - H0|: {:.6e}\n", d.max_abs_drift));
        out.push_str(&format!("max relative drift: {:.6e}\n", d.max_rel_drift));
        out.push_str(&format!("max |dH/dtau - partial_tau H|: {:.6e}\n", d.max_monitor_error));
        out.push_str(&format!("autonomous: {}\n", if self.autonomous { "yes" } else { "no" }));
        if let (Some(ok), Some(tol)) = (self.passed, self.tolerance) {
            out.push_str(&format!("tolerance: {tol:e}\nconserved: {}\n", if ok { "yes" } else { "no" }))
        }
        out
    }

    pub fn to_json(&self) -> String {
        let t = &self.trajectory;
        let samples: Vec<_> = (0..t.len())
            .map(|k| json!({ "tau": t.taus()[k], "state": t.states()[k], "H": t.energies()[k] }))
            .collect();
        let v = json!({
            "model": self.model,
            "method": t.method,
            "step": t.step,
            "steps": t.steps,
            "names": t.names(),
            "drift": self.drift,
            "autonomous": self.autonomous,
            "passed": self.passed,
            "samples": samples,
        });
        serde_json::to_string_pretty(&v).expect("json") + "\n"
    }
}

/// `simulate`: integrates the Hamilton equations of a point model and
/// monitors `𝓗`.
pub fn cmd_simulate(model: &ModelFile, opts: &RunOptions) -> Result<SimulationOutput, DriverError> {
    let d = derive(model)?;
    let ode = OdeSystem::from_hamiltonian(&d.system, &d.params)?;
    let x0 = initial_state(&d.system, &d.params, opts.tau0, &opts.init, 0.0)?;
    let trajectory = integrate_with_stride(&ode, &x0, opts.tau0, opts.tau1, opts.method, opts.step, opts.stride)?;
    let drift = monitor_energy(&trajectory, &ode)?;
    let autonomous = d.system.is_autonomous();
    let passed = opts.tolerance.filter(|_| autonomous).map(|tol| drift.max_rel_drift <= tol);
    Ok(SimulationOutput { model: model.name.clone(), trajectory, drift, autonomous, passed, tolerance: opts.tolerance })
}

/// Runs `cmd_simulate` once per value of parameter `name`, concurrently.
pub fn cmd_sweep(
    model: &ModelFile,
    name: &str,
    values: &[String],
    opts: &RunOptions,
) -> Result<Vec<(String, Result<SimulationOutput, DriverError>)>, DriverError> {
    let idx = model
        .params
        .iter()
        .position(|p| p.name == name)
        .ok_or_else(|| DriverError::Usage(format!("`{name}` is not a parameter of the model")))?;
    let mut variants = Vec::with_capacity(values.len());
    for v in values {
        let q: BigRational =
            parse_sweep_value(v).ok_or_else(|| DriverError::Usage(format!("`{v}` is not a number")))?;
        let mut m = model.clone();
        m.params[idx].value = q;
        variants.push((v.clone(), m));
    }
    Ok(std::thread::scope(|scope| {
        let handles: Vec<_> =
            variants.iter().map(|(v, m)| (v.clone(), scope.spawn(move || cmd_simulate(m, opts)))).collect();
        handles.into_iter().map(|(v, h)| (v, h.join().expect("simulation thread panicked"))).collect()
    }))
}

fn parse_sweep_value(v: &str) -> Option<BigRational> {
    match v.strip_prefix('-') {
        Some(rest) => parse_decimal(rest).map(|q| -q),
        None => parse_decimal(v),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GravityOptions {
    pub run: RunOptions,
}

impl Default for GravityOptions {
    fn default() -> Self {
        GravityOptions {
            run: RunOptions { tau1: 1.0, step: 1e-4, tolerance: Some(1e-6), ..RunOptions::default() },
        }
    }
}

#[derive(Clone, Debug)]
pub struct GravityOutput {
    pub derivation: GravityDerivation,
    pub conservation: ConservationReport,
}

impl GravityOutput {
    pub fn to_text(&self) -> String {
        format!("# homfield {VERSION} gravity\n{}{}", self.derivation.to_text(), self.conservation.to_text())
    }

    pub fn to_json(&self) -> String {
        let d = &self.derivation;
        let s = d.system.space();
        let momenta: BTreeMap<String, String> = match d.system.legendre_data() {
            Some(l) => (0..s.m()).map(|i| (s.momentum(i).name().to_string(), l.momenta[i].to_string())).collect(),
            None => BTreeMap::new(),
        };
        let v = json!({
            "ansatz": d.ansatz,
            "metric": d.metric.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "sqrt_det": d.sqrt_det.to_string(),
            "scalar_curvature": d.scalar_curvature.to_string(),
            "he_lagrangian": d.he_lagrangian.to_string(),
            "boundary_term": d.boundary_term.to_string(),
            "reduced_lagrangian": d.reduced_lagrangian.to_string(),
            "momenta": momenta,
            "hamiltonian": d.system.hamiltonian().to_string(),
            "equations": d.system.equations().into_iter().map(|e| json!({"lhs": e.lhs, "rhs": e.rhs.to_string()})).collect::<Vec<_>>(),
            "conservation": self.conservation,
        });
        serde_json::to_string_pretty(&v).expect("json") + "\n"
    }

    pub fn csv(&self) -> String {
        self.conservation.trajectory.to_csv()
    }
}

/// `gravity`: Hilbert–Einstein Lagrangian of an ansatz, its first-order
/// reduction, the formal Hamiltonian and a conservation run. Scale factors
/// default to 1 and velocities to 0.
pub fn cmd_gravity(ansatz: &str, opts: &GravityOptions) -> Result<GravityOutput, DriverError> {
    let g = MetricAnsatz::by_name(ansatz)?;
    let derivation = formal_gravity_hamiltonian(&g)?;
    let r = &opts.run;
    let x0 = initial_state(&derivation.system, &Env::new(), r.tau0, &r.init, 1.0)?;
    let tol = r.tolerance.unwrap_or(1e-6);
    let conservation = check_energy_conservation(&derivation.system, &x0, r.tau0, r.tau1, r.method, r.step, r.stride, tol)?;
    Ok(GravityOutput { derivation, conservation })
}
