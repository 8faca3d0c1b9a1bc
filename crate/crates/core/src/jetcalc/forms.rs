use std::collections::BTreeMap;
use std::fmt;

use crate::symexpr::{differentiate, is_zero, simplify, substitute, Bindings, Expr, Symbol};

use super::{Direction, JetSpace};

/// Exterior form in coordinate differentials. Each key is a strictly
/// increasing list of coordinates `[z_1, …, z_k]` standing for
/// `dz_1 ∧ … ∧ dz_k`; the empty key is the function part.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DifferentialForm {
    terms: BTreeMap<Vec<Symbol>, Expr>,
}

/// Sorts `key` in place and returns the permutation sign, or `None` if a
/// differential repeats.
fn canonical(key: &mut [Symbol]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..key.len() {
        let mut j = i;
        while j > 0 && key[j - 1] > key[j] {
            key.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if key.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

impl DifferentialForm {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The 0-form `f`.
    pub fn function(f: Expr) -> Self {
        let mut out = Self::zero();
        out.add_term(Vec::new(), f);
        out
    }

    /// `dz`.
    pub fn differential(z: &Symbol) -> Self {
        Self::monomial(Expr::one(), std::slice::from_ref(z))
    }

    /// `c · dz_1 ∧ … ∧ dz_k` in the given (not necessarily sorted) order.
    pub fn monomial(c: Expr, zs: &[Symbol]) -> Self {
        let mut out = Self::zero();
        out.add_term(zs.to_vec(), c);
        out
    }

    fn add_term(&mut self, mut key: Vec<Symbol>, c: Expr) {
        let Some(sign) = canonical(&mut key) else { return };
        let c = if sign < 0 { -c } else { c };
        let total = match self.terms.remove(&key) {
            Some(prev) => simplify(&(prev + c)),
            None => simplify(&c),
        };
        if !total.is_literal_zero() {
            self.terms.insert(key, total);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Symbol], &Expr)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// Coefficient of `dz_1 ∧ … ∧ dz_k`, with the sign of the given ordering.
    pub fn coefficient(&self, zs: &[Symbol]) -> Expr {
        let mut key = zs.to_vec();
        match canonical(&mut key) {
            None => Expr::zero(),
            Some(sign) => match self.terms.get(&key) {
                None => Expr::zero(),
                Some(c) if sign < 0 => simplify(&-c.clone()),
                Some(c) => c.clone(),
            },
        }
    }

    /// Degree of the form if it is homogeneous and non-zero.
    pub fn degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(Vec::len);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(is_zero)
    }

    pub fn equals(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }

    pub fn scale(&self, f: &Expr) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.clone() * f);
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let key: Vec<Symbol> = ka.iter().chain(kb.iter()).cloned().collect();
                out.add_term(key, ca.clone() * cb);
            }
        }
        out
    }

    /// `d`, treating every non-parameter symbol as an independent coordinate.
    pub fn exterior_derivative(&self) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            for s in c.symbols() {
                if s.is_parameter() {
                    continue;
                }
                let dc = differentiate(c, &s);
                if dc.is_literal_zero() {
                    continue;
                }
                let mut key = Vec::with_capacity(k.len() + 1);
                key.push(s);
                key.extend(k.iter().cloned());
                out.add_term(key, dc);
            }
        }
        out
    }

    /// `v ⌋ ω`.
    pub fn interior(&self, v: &VectorField) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            for (j, z) in k.iter().enumerate() {
                let Some(vz) = v.component(z) else { continue };
                let mut key = k.clone();
                key.remove(j);
                let term = c.clone() * vz;
                out.add_term(key, if j % 2 == 1 { -term } else { term });
            }
        }
        out
    }

    /// Pull-back along the coordinate map `z ↦ map[z]`; coordinates not in
    /// `map` are kept. Each `dz` becomes the differential of its image.
    pub fn pullback(&self, map: &Bindings) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            let mut acc = Self::function(substitute(c, map));
            for z in k {
                let dz = match map.get(z) {
                    Some(image) => Self::function(image.clone()).exterior_derivative(),
                    None => Self::differential(z),
                };
                acc = acc.wedge(&dz);
            }
            out = &out + &acc;
        }
        out
    }

    /// Applies `f` to every coefficient.
    pub fn map_coefficients(&self, f: impl Fn(&Expr) -> Expr) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), f(c));
        }
        out
    }
}

impl std::ops::Add for &DifferentialForm {
    type Output = DifferentialForm;
    fn add(self, rhs: &DifferentialForm) -> DifferentialForm {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &DifferentialForm {
    type Output = DifferentialForm;
    fn sub(self, rhs: &DifferentialForm) -> DifferentialForm {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), -c.clone());
        }
        out
    }
}

impl std::ops::Neg for &DifferentialForm {
    type Output = DifferentialForm;
    fn neg(self) -> DifferentialForm {
        self.scale(&Expr::int(-1))
    }
}

fn write_differential(f: &mut fmt::Formatter<'_>, z: &Symbol) -> fmt::Result {
    let name = z.name();
    if name.chars().all(|c| c.is_alphanumeric() || c == '_') {
        write!(f, "d{name}")
    } else {
        write!(f, "d[{name}]")
    }
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            if k.is_empty() {
                write!(f, "{c}")?;
                continue;
            }
            if !c.is_literal_one() {
                write!(f, "({c}) ")?;
            }
            for (j, z) in k.iter().enumerate() {
                if j > 0 {
                    write!(f, "^")?;
                }
                write_differential(f, z)?;
            }
        }
        Ok(())
    }
}

/// Vector field by components along coordinate directions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VectorField {
    components: BTreeMap<Symbol, Expr>,
}

impl VectorField {
    pub fn new() -> Self {
        Self::default()
    }

    /// `∂_z`.
    pub fn coordinate(z: &Symbol) -> Self {
        Self::new().with(z, Expr::one())
    }

    pub fn with(mut self, z: &Symbol, c: Expr) -> Self {
        let c = simplify(&c);
        if c.is_literal_zero() {
            self.components.remove(z);
        } else {
            self.components.insert(z.clone(), c);
        }
        self
    }

    pub fn component(&self, z: &Symbol) -> Option<&Expr> {
        self.components.get(z)
    }

    pub fn components(&self) -> impl Iterator<Item = (&Symbol, &Expr)> {
        self.components.iter()
    }

    /// `v(f) = Σ v^z ∂_z f`.
    pub fn apply(&self, f: &Expr) -> Expr {
        simplify(&Expr::sum(self.components.iter().map(|(z, c)| c.clone() * differentiate(f, z)).collect()))
    }
}

impl JetSpace {
    /// `dz` for a direction.
    pub fn direction_differential(&self, dir: Direction) -> DifferentialForm {
        DifferentialForm::differential(self.direction_symbol(dir))
    }

    /// `ω̂ = dx^1 ∧ … ∧ dx^n ∧ dτ`.
    pub fn volume_form(&self) -> DifferentialForm {
        let dirs: Vec<Symbol> = self.directions().iter().map(|d| self.direction_symbol(*d).clone()).collect();
        DifferentialForm::monomial(Expr::one(), &dirs)
    }

    /// `ω̂_dir = ∂_dir ⌋ ω̂`.
    pub fn volume_form_contracted(&self, dir: Direction) -> DifferentialForm {
        self.volume_form().interior(&VectorField::coordinate(self.direction_symbol(dir)))
    }
}
