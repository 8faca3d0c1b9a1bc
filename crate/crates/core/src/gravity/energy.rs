use serde::Serialize;

use crate::evolve::{integrate_with_stride, monitor_energy, DriftReport, EvolveError, Method, OdeSystem, Trajectory};
use crate::hamilton::{legendre, HamiltonianSystem, LagrangianModel};
use crate::jetcalc::Direction;
use crate::symexpr::{coefficient, degree_in, eval_numeric, rat, simplify, Env, Expr};

use super::{he_lagrangian, scalar_curvature, sqrt_abs_det, GravityError, MetricAnsatz};

/// The pipeline `L_HE → L = L_HE − D_τB → 𝓗` for one ansatz.
#[derive(Clone, Debug)]
pub struct GravityDerivation {
    pub ansatz: String,
    pub metric: Vec<Expr>,
    pub sqrt_det: Expr,
    pub scalar_curvature: Expr,
    pub he_lagrangian: Expr,
    /// `B` with `L_HE = L + D_τ B`.
    pub boundary_term: Expr,
    pub reduced_lagrangian: Expr,
    pub model: LagrangianModel,
    pub system: HamiltonianSystem,
}

impl GravityDerivation {
    pub fn to_text(&self) -> String {
        let s = self.system.space();
        let metric: Vec<String> = self.metric.iter().map(ToString::to_string).collect();
        let mut out = format!("ansatz: {}\n", self.ansatz);
        out.push_str(&format!("metric: diag({})\n", metric.join(", ")));
        out.push_str(&format!("sqrt|det g|: {} (scale factors taken positive)\n", self.sqrt_det));
        out.push_str(&format!("scalar curvature: {}\n", self.scalar_curvature));
        out.push_str(&format!("L_HE: {}\n", self.he_lagrangian));
        out.push_str(&format!("boundary term: {} (L_HE = L + D_tau of it)\n", self.boundary_term));
        out.push_str(&format!("reduced lagrangian: {}\n", self.reduced_lagrangian));
        if let Some(d) = self.system.legendre_data() {
            for i in 0..s.m() {
                out.push_str(&format!("momentum: {} = {}\n", s.momentum(i).name(), d.momenta[i]));
            }
        }
        out.push_str(&format!("hamiltonian: {}\n", self.system.hamiltonian()));
        for e in self.system.equations() {
            out.push_str(&format!("equation: {} = {}\n", e.lhs, e.rhs));
        }
        let m = self.system.monitor_equation();
        out.push_str(&format!("monitor: {} = {}\n", m.lhs, m.rhs));
        out
    }
}

/// Order reduction and Legendre transform. `L_HE` must be affine in the
/// accelerations with coefficients `c_k(q, τ)`; then `B = Σ c_k q̇_k` and
/// `L = L_HE − D_τB` is first order.
pub fn formal_gravity_hamiltonian(g: &MetricAnsatz) -> Result<GravityDerivation, GravityError> {
    let space = g.space();
    let r = scalar_curvature(g)?;
    let l_he = he_lagrangian(g)?;
    let velocities = space.velocities();
    let mut boundary = Vec::new();
    for k in 0..space.m() {
        let acc = Expr::sym(&space.jet_along(k, &[Direction::Tau, Direction::Tau]));
        if degree_in(&l_he, &acc).is_some_and(|d| d > rat(1, 1)) {
            return Err(GravityError::NonReducible(format!("L_HE is not affine in {acc}")));
        }
        let c = coefficient(&l_he, &acc, 1);
        if let Some(bad) = c.symbols().into_iter().find(|s| space.jet_parts(s).is_some_and(|(_, a)| !a.is_zero())) {
            return Err(GravityError::NonReducible(format!("coefficient of {acc} depends on {}", bad.name())));
        }
        boundary.push(c * Expr::sym(&velocities[k]));
    }
    let boundary = simplify(&Expr::sum(boundary));
    let reduced = simplify(&(l_he.clone() - space.total_derivative(&boundary, Direction::Tau)));
    let model = LagrangianModel::new(space.clone(), reduced.clone())?;
    let system = legendre(&model)?;
    Ok(GravityDerivation {
        ansatz: g.name().to_string(),
        metric: (0..g.dim()).map(|mu| g.component(mu).clone()).collect(),
        sqrt_det: sqrt_abs_det(g),
        scalar_curvature: r,
        he_lagrangian: l_he,
        boundary_term: boundary,
        reduced_lagrangian: reduced,
        model,
        system,
    })
}

/// `p̄_k = ∂L/∂q̇_k` evaluated at `(q, q̇)`.
pub fn initial_momenta(d: &GravityDerivation, q: &[f64], qdot: &[f64]) -> Result<Vec<f64>, GravityError> {
    let s = d.system.space();
    let data = d.system.legendre_data().expect("gravity systems come from a Legendre map");
    let mut env = Env::new();
    for k in 0..s.m() {
        env.insert(s.field(k).clone(), q[k]);
        env.insert(s.velocity(k), qdot[k]);
    }
    env.insert(s.tau().clone(), 0.0);
    data.momenta
        .iter()
        .map(|p| eval_numeric(p, &env).map_err(|e| GravityError::Evolve(EvolveError::Evaluation(e))))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ConservationReport {
    pub drift: DriftReport,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip)]
    pub trajectory: Trajectory,
}

impl ConservationReport {
    pub fn to_text(&self) -> String {
        format!(
            "initial H: {:.16e}\nmax |H - H0|: {:.6e}\nmax relative drift: {:.6e}\nmax |dH/dtau - dH/dtau (predicted)|: {:.6e}\ntolerance: {:.1e}\nconserved: {}\n",
            self.drift.initial_energy,
            self.drift.max_abs_drift,
            self.drift.max_rel_drift,
            self.drift.max_monitor_error,
            self.tolerance,
            if self.passed { "yes" } else { "no" },
        )
    }
}

/// Integrates the formal Hamilton equations from `initial = (q, p̄)` and
/// compares the relative drift of `𝓗` with `tolerance`.
#[allow(clippy::too_many_arguments)]
pub fn check_energy_conservation(
    sys: &HamiltonianSystem,
    initial: &[f64],
    tau0: f64,
    tau1: f64,
    method: Method,
    step: f64,
    stride: usize,
    tolerance: f64,
) -> Result<ConservationReport, GravityError> {
    let ode = OdeSystem::from_hamiltonian(sys, &Env::new())?;
    let trajectory = integrate_with_stride(&ode, initial, tau0, tau1, method, step, stride)?;
    let drift = monitor_energy(&trajectory, &ode)?;
    let passed = drift.max_rel_drift <= tolerance;
    Ok(ConservationReport { drift, tolerance, passed, trajectory })
}
