use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{EvolveError, OdeSystem, Trajectory};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Rk4,
    ImplicitMidpoint,
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rk4" => Ok(Method::Rk4),
            "midpoint" | "implicit-midpoint" => Ok(Method::ImplicitMidpoint),
            _ => Err(format!("unknown method `{s}` (expected rk4 or midpoint)")),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Rk4 => "rk4",
            Method::ImplicitMidpoint => "midpoint",
        })
    }
}

const MIDPOINT_TOL: f64 = 1e-13;
const MIDPOINT_MAX_ITER: usize = 50;

struct Stepper<'a> {
    sys: &'a OdeSystem,
    buf: Vec<f64>,
    k: [Vec<f64>; 4],
    tmp: Vec<f64>,
}

impl<'a> Stepper<'a> {
    fn new(sys: &'a OdeSystem) -> Self {
        let n = sys.dim();
        Stepper { sys, buf: Vec::new(), k: std::array::from_fn(|_| vec![0.0; n]), tmp: vec![0.0; n] }
    }

    fn rk4(&mut self, t: f64, h: f64, x: &mut [f64]) -> Result<(), EvolveError> {
        let n = x.len();
        let [k1, k2, k3, k4] = &mut self.k;
        self.sys.rhs_into(t, x, &mut self.buf, k1)?;
        for j in 0..n {
            self.tmp[j] = x[j] + 0.5 * h * k1[j];
        }
        self.sys.rhs_into(t + 0.5 * h, &self.tmp, &mut self.buf, k2)?;
        for j in 0..n {
            self.tmp[j] = x[j] + 0.5 * h * k2[j];
        }
        self.sys.rhs_into(t + 0.5 * h, &self.tmp, &mut self.buf, k3)?;
        for j in 0..n {
            self.tmp[j] = x[j] + h * k3[j];
        }
        self.sys.rhs_into(t + h, &self.tmp, &mut self.buf, k4)?;
        for j in 0..n {
            x[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        Ok(())
    }

    /// `x₁ = x₀ + h f(t + h/2, (x₀ + x₁)/2)` by fixed-point iteration from an
    /// explicit Euler guess.
    fn midpoint(&mut self, t: f64, h: f64, x: &mut [f64]) -> Result<(), EvolveError> {
        let n = x.len();
        let [f, next, _, _] = &mut self.k;
        self.sys.rhs_into(t, x, &mut self.buf, f)?;
        for j in 0..n {
            next[j] = x[j] + h * f[j];
        }
        for _ in 0..MIDPOINT_MAX_ITER {
            for j in 0..n {
                self.tmp[j] = 0.5 * (x[j] + next[j]);
            }
            self.sys.rhs_into(t + 0.5 * h, &self.tmp, &mut self.buf, f)?;
            let mut delta: f64 = 0.0;
            for j in 0..n {
                let updated = x[j] + h * f[j];
                let scale = updated.abs().max(1.0);
                delta = delta.max((updated - next[j]).abs() / scale);
                next[j] = updated;
            }
            if !delta.is_finite() {
                return Err(EvolveError::NonFiniteState(t + h));
            }
            if delta <= MIDPOINT_TOL {
                x.copy_from_slice(next);
                return Ok(());
            }
        }
        Err(EvolveError::FixedPointDivergence(t))
    }
}

/// Integrates from `tau0` to `tau1` with `ceil((tau1 − tau0)/h)` equal steps,
/// recording every step.
pub fn integrate(
    sys: &OdeSystem,
    initial: &[f64],
    tau0: f64,
    tau1: f64,
    method: Method,
    h: f64,
) -> Result<Trajectory, EvolveError> {
    integrate_with_stride(sys, initial, tau0, tau1, method, h, 1)
}

/// As [`integrate`], recording every `stride`-th step; the final state is
/// always recorded.
pub fn integrate_with_stride(
    sys: &OdeSystem,
    initial: &[f64],
    tau0: f64,
    tau1: f64,
    method: Method,
    h: f64,
    stride: usize,
) -> Result<Trajectory, EvolveError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(EvolveError::InvalidStep(h));
    }
    if !(tau1 > tau0 && tau0.is_finite() && tau1.is_finite()) {
        return Err(EvolveError::InvalidSpan(tau0, tau1));
    }
    if initial.len() != sys.dim() {
        return Err(EvolveError::DimensionMismatch { expected: sys.dim(), found: initial.len() });
    }
    let span = tau1 - tau0;
    // tolerate spans that are an integer multiple of h up to round-off
    let steps = ((span / h) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let dt = span / steps as f64;
    let stride = stride.max(1);
    let mut traj = Trajectory::new(sys.names().to_vec(), method, dt, steps, stride);
    let mut x = initial.to_vec();
    traj.push(tau0, &x, sys.energy(tau0, &x)?);
    let mut stepper = Stepper::new(sys);
    for k in 0..steps {
        let t = tau0 + k as f64 * dt;
        match method {
            Method::Rk4 => stepper.rk4(t, dt, &mut x)?,
            Method::ImplicitMidpoint => stepper.midpoint(t, dt, &mut x)?,
        }
        let t_next = if k + 1 == steps { tau1 } else { tau0 + (k + 1) as f64 * dt };
        if x.iter().any(|v| !v.is_finite()) {
            return Err(EvolveError::NonFiniteState(t_next));
        }
        if (k + 1) % stride == 0 || k + 1 == steps {
            traj.push(t_next, &x, sys.energy(t_next, &x)?);
        }
    }
    Ok(traj)
}
