use std::io::{self, Write};

use serde::Serialize;

use super::{EvolveError, Method, OdeSystem};

/// Sampled solution `(τ, x, 𝓗)`.
#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    names: Vec<String>,
    taus: Vec<f64>,
    states: Vec<Vec<f64>>,
    energies: Vec<f64>,
    pub method: Method,
    pub step: f64,
    pub steps: usize,
    pub stride: usize,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Trajectory {
    pub(crate) fn new(names: Vec<String>, method: Method, step: f64, steps: usize, stride: usize) -> Self {
        Trajectory { names, taus: Vec::new(), states: Vec::new(), energies: Vec::new(), method, step, steps, stride }
    }

    pub(crate) fn push(&mut self, tau: f64, x: &[f64], energy: f64) {
        self.taus.push(tau);
        self.states.push(x.to_vec());
        self.energies.push(energy);
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }

    pub fn taus(&self) -> &[f64] {
        &self.taus
    }

    pub fn states(&self) -> &[Vec<f64>] {
        &self.states
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().map_or(&[], Vec::as_slice)
    }

    /// Values of one state component over the samples.
    pub fn component(&self, j: usize) -> Vec<f64> {
        self.states.iter().map(|x| x[j]).collect()
    }

    /// Header `tau,<names>,H`, one row per sample, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let mut header = vec!["tau".to_string()];
        header.extend(self.names.iter().map(|n| csv_field(n)));
        header.push("H".to_string());
        writeln!(w, "{}", header.join(","))?;
        for ((t, x), e) in self.taus.iter().zip(&self.states).zip(&self.energies) {
            write!(w, "{t:.16e}")?;
            for v in x {
                write!(w, ",{v:.16e}")?;
            }
            writeln!(w, ",{e:.16e}")?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = Vec::new();
        self.write_csv(&mut out).expect("writing to a Vec cannot fail");
        String::from_utf8(out).expect("CSV output is UTF-8")
    }
}

/// Energy conservation diagnostics for a trajectory.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DriftReport {
    pub initial_energy: f64,
    /// `max |𝓗(τ) − 𝓗(τ₀)|`.
    pub max_abs_drift: f64,
    /// `max_abs_drift / |𝓗(τ₀)|`, or the absolute drift when `𝓗(τ₀) = 0`.
    pub max_rel_drift: f64,
    /// `max |Δ𝓗/Δτ − ∂_τ𝓗|` with central differences at interior samples.
    pub max_monitor_error: f64,
    pub samples: usize,
}

pub fn monitor_energy(traj: &Trajectory, sys: &OdeSystem) -> Result<DriftReport, EvolveError> {
    let e = traj.energies();
    let e0 = e.first().copied().unwrap_or(0.0);
    let max_abs = e.iter().map(|v| (v - e0).abs()).fold(0.0, f64::max);
    let max_rel = if e0 != 0.0 { max_abs / e0.abs() } else { max_abs };
    let t = traj.taus();
    let mut max_monitor: f64 = 0.0;
    for k in 1..t.len().saturating_sub(1) {
        let fd = (e[k + 1] - e[k - 1]) / (t[k + 1] - t[k - 1]);
        let predicted = sys.monitor(t[k], &traj.states()[k])?;
        max_monitor = max_monitor.max((fd - predicted).abs());
    }
    Ok(DriftReport {
        initial_energy: e0,
        max_abs_drift: max_abs,
        max_rel_drift: max_rel,
        max_monitor_error: max_monitor,
        samples: t.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::{integrate, integrate_with_stride};
    use super::*;
    use crate::hamilton::HamiltonianSystem;
    use crate::jetcalc::JetSpace;
    use crate::symexpr::{parse_expr, Env};

    fn ode(h: &str) -> OdeSystem {
        let s = JetSpace::new(&[], "tau", &["y"], 1).unwrap();
        let h = parse_expr(h, &s).unwrap();
        OdeSystem::from_hamiltonian(&HamiltonianSystem::new(s, h).unwrap(), &Env::new()).unwrap()
    }

    #[test]
    fn oscillator_period() {
        let sys = ode("1/2*p(y)^2 + 1/2*y^2");
        let tr = integrate(&sys, &[1.0, 0.0], 0.0, 2.0 * std::f64::consts::PI, Method::Rk4, 1e-3).unwrap();
        assert!((tr.final_state()[0] - 1.0).abs() < 1e-8);
        assert_eq!(tr.len(), tr.steps + 1);
    }

    #[test]
    fn free_motion_is_exact() {
        let sys = ode("1/2*p(y)^2");
        let tr = integrate(&sys, &[0.5, -1.25], 0.0, 3.0, Method::Rk4, 0.1).unwrap();
        for (t, x) in tr.taus().iter().zip(tr.states()) {
            assert!((x[0] - (0.5 - 1.25 * t)).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_state_and_fixed_points() {
        let sys = ode("1/2*p(y)^2 + 1/2*y^2");
        for m in [Method::Rk4, Method::ImplicitMidpoint] {
            let tr = integrate(&sys, &[0.0, 0.0], 0.0, 1.0, m, 0.01).unwrap();
            assert!(tr.states().iter().flatten().all(|v| *v == 0.0));
            assert_eq!(monitor_energy(&tr, &sys).unwrap().max_abs_drift, 0.0);
        }
    }

    #[test]
    fn stride_and_csv() {
        let sys = ode("1/2*p(y)^2 + 1/2*y^2");
        let tr = integrate_with_stride(&sys, &[1.0, 0.0], 0.0, 1.0, Method::Rk4, 0.01, 10).unwrap();
        assert_eq!(tr.len(), 100 / 10 + 1);
        let csv = tr.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "tau,y,p(y),H");
        assert_eq!(lines.next().unwrap().split(',').count(), 4);
        assert!(csv.lines().nth(1).unwrap().starts_with("0.0000000000000000e0,"));
    }

    #[test]
    fn rejects_bad_input() {
        let sys = ode("1/2*p(y)^2");
        assert!(matches!(integrate(&sys, &[0.0, 0.0], 0.0, 1.0, Method::Rk4, 0.0), Err(EvolveError::InvalidStep(_))));
        assert!(matches!(integrate(&sys, &[0.0, 0.0], 1.0, 0.0, Method::Rk4, 0.1), Err(EvolveError::InvalidSpan(..))));
        assert!(integrate(&sys, &[0.0], 0.0, 1.0, Method::Rk4, 0.1).is_err());
        let blowup = ode("1/2*p(y)^2 - 1/3*y^3");
        let r = integrate(&blowup, &[10.0, 100.0], 0.0, 10.0, Method::Rk4, 0.1);
        assert!(matches!(r, Err(EvolveError::NonFiniteState(_))));
        let r = integrate(&blowup, &[10.0, 100.0], 0.0, 10.0, Method::ImplicitMidpoint, 0.5);
        assert!(matches!(r, Err(EvolveError::FixedPointDivergence(_)) | Err(EvolveError::NonFiniteState(_))));
    }
}
