use crate::jetcalc::{Direction, JetSpace};
use crate::symexpr::{differentiate, is_zero, simplify, Expr};

use super::GravityError;

/// Diagonal metric `g = diag(g_00, …, g_{D−1,D−1})` whose components depend
/// on the ansatz coordinates, parameters and metric functions `q_k(τ)`.
///
/// The coordinates are directions of the jet space: `τ` plays the role of
/// the ansatz time where it appears. Metric functions depend on `τ` only, so
/// derivatives along base coordinates are partial derivatives and the
/// derivative along `τ` is the total derivative `D_τ`.
#[derive(Clone, Debug)]
pub struct MetricAnsatz {
    name: String,
    space: JetSpace,
    coords: Vec<Direction>,
    diagonal: Vec<Expr>,
}

impl MetricAnsatz {
    pub fn new(
        name: &str,
        space: JetSpace,
        coords: Vec<Direction>,
        diagonal: Vec<Expr>,
    ) -> Result<Self, GravityError> {
        if coords.len() != diagonal.len() {
            return Err(GravityError::InvalidAnsatz(format!(
                "{} coordinates but {} diagonal components",
                coords.len(),
                diagonal.len()
            )));
        }
        for (mu, g) in diagonal.iter().enumerate() {
            if is_zero(g) {
                return Err(GravityError::SingularMetric(mu));
            }
            for s in g.symbols() {
                let ok = space.is_base_symbol(&s) || space.fields().contains(&s);
                if !ok {
                    return Err(GravityError::InvalidAnsatz(format!("g_{mu}{mu} depends on `{}`", s.name())));
                }
            }
        }
        Ok(MetricAnsatz { name: name.to_string(), space, coords, diagonal: diagonal.iter().map(simplify).collect() })
    }

    /// Flat FRW in `τ`: `diag(−1, a², a², a²)`.
    pub fn frw() -> Self {
        let space = JetSpace::new(&["x", "y", "z"], "tau", &["a"], 2).expect("valid names");
        let a2 = Expr::sym(space.field(0)).powi(2);
        let coords = vec![Direction::Tau, Direction::Base(0), Direction::Base(1), Direction::Base(2)];
        Self::new("frw", space, coords, vec![Expr::int(-1), a2.clone(), a2.clone(), a2]).expect("valid ansatz")
    }

    /// Bianchi I: `diag(−1, a1², a2², a3²)`.
    pub fn bianchi1() -> Self {
        let space = JetSpace::new(&["x", "y", "z"], "tau", &["a1", "a2", "a3"], 2).expect("valid names");
        let mut diagonal = vec![Expr::int(-1)];
        diagonal.extend(space.fields().iter().map(|f| Expr::sym(f).powi(2)));
        let coords = vec![Direction::Tau, Direction::Base(0), Direction::Base(1), Direction::Base(2)];
        Self::new("bianchi1", space, coords, diagonal).expect("valid ansatz")
    }

    /// Static flat metric with a free lapse: `diag(−n², 1, 1, 1)`. Its
    /// Lagrangian carries no velocity dependence.
    pub fn static_lapse() -> Self {
        let space = JetSpace::new(&["x", "y", "z"], "tau", &["n"], 2).expect("valid names");
        let coords = vec![Direction::Tau, Direction::Base(0), Direction::Base(1), Direction::Base(2)];
        let diagonal = vec![-Expr::sym(space.field(0)).powi(2), Expr::one(), Expr::one(), Expr::one()];
        Self::new("static", space, coords, diagonal).expect("valid ansatz")
    }

    /// Minkowski space `diag(−1, 1, 1, 1)`.
    pub fn minkowski() -> Self {
        let space = JetSpace::new(&["x", "y", "z"], "tau", &[], 2).expect("valid names");
        let coords = vec![Direction::Tau, Direction::Base(0), Direction::Base(1), Direction::Base(2)];
        Self::new("minkowski", space, coords, vec![Expr::int(-1), Expr::one(), Expr::one(), Expr::one()])
            .expect("valid ansatz")
    }

    /// Round 2-sphere of radius `a`: `diag(a², a² sin²θ)` in `(θ, φ)`.
    pub fn sphere() -> Self {
        let space = JetSpace::new(&["theta", "phi"], "tau", &[], 2)
            .and_then(|s| s.with_parameters(&["a"]))
            .expect("valid names");
        let a2 = Expr::sym(space.parameter("a").unwrap()).powi(2);
        let s2 = Expr::sym(space.base(0)).sin().powi(2);
        let coords = vec![Direction::Base(0), Direction::Base(1)];
        Self::new("sphere", space, coords, vec![a2.clone(), a2 * s2]).expect("valid ansatz")
    }

    pub fn by_name(name: &str) -> Result<Self, GravityError> {
        match name {
            "frw" => Ok(Self::frw()),
            "bianchi1" | "bianchi-i" => Ok(Self::bianchi1()),
            "static" => Ok(Self::static_lapse()),
            _ => Err(GravityError::UnknownAnsatz(name.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &JetSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coordinates(&self) -> &[Direction] {
        &self.coords
    }

    /// `g_μμ`.
    pub fn component(&self, mu: usize) -> &Expr {
        &self.diagonal[mu]
    }

    /// `g_μν`, zero off the diagonal.
    pub fn g(&self, mu: usize, nu: usize) -> Expr {
        if mu == nu {
            self.diagonal[mu].clone()
        } else {
            Expr::zero()
        }
    }

    /// `g^μμ`.
    pub fn inverse(&self, mu: usize) -> Expr {
        simplify(&self.diagonal[mu].recip())
    }

    /// `∂_μ` of an expression in the ansatz variables.
    pub fn partial(&self, e: &Expr, mu: usize) -> Expr {
        match self.coords[mu] {
            Direction::Tau => self.space.total_derivative(e, Direction::Tau),
            Direction::Base(l) => differentiate(e, self.space.base(l)),
        }
    }
}
