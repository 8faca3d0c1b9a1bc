use std::collections::BTreeSet;

use crate::symexpr::{Resolver, Symbol, SymbolKind, RESERVED};

use super::{Direction, MultiIndex};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum JetError {
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("`{0}` is a reserved name")]
    ReservedName(String),
    #[error("jet order must be at least 1")]
    OrderTooLow,
    #[error("expression depends on jet order {found}, above the supported {max}")]
    OrderTooHigh { found: u32, max: u32 },
    #[error("section component `{0}` depends on fiber coordinates")]
    NotASection(String),
    #[error("form of degree {0} where a 1-form is required")]
    WrongDegree(usize),
    #[error("`{0}` is not a coordinate of this jet space")]
    UnknownSymbol(String),
}

/// Coordinates `(x^λ, τ, y^i_α)` of `J_rY` for the composite bundle
/// `Y → Θ → X`, together with momenta `p̄_i` and model parameters.
///
/// `τ` is treated as an extra base direction: multi-indices carry a separate
/// `τ`-order and `D_τ` is a total derivative like `D_λ`. The order bound is
/// advisory; jet coordinates of any order can be produced on demand.
#[derive(Clone, Debug)]
pub struct JetSpace {
    base: Vec<Symbol>,
    line: Symbol,
    fields: Vec<Symbol>,
    momenta: Vec<Symbol>,
    parameters: Vec<Symbol>,
    order: u32,
}

fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1u64, |acc, i| acc * (n + 1 - i) / i)
}

impl JetSpace {
    pub fn new(base: &[&str], line: &str, fields: &[&str], order: u32) -> Result<Self, JetError> {
        let mut seen = BTreeSet::new();
        for name in base.iter().chain(std::iter::once(&line)).chain(fields.iter()) {
            if RESERVED.contains(name) {
                return Err(JetError::ReservedName(name.to_string()));
            }
            if !seen.insert(*name) {
                return Err(JetError::DuplicateName(name.to_string()));
            }
        }
        Ok(JetSpace {
            base: base.iter().enumerate().map(|(l, n)| Symbol::new(*n, SymbolKind::BaseCoord(l))).collect(),
            line: Symbol::new(line, SymbolKind::LineCoord),
            fields: fields.iter().enumerate().map(|(i, n)| Symbol::new(*n, SymbolKind::Field(i))).collect(),
            momenta: fields
                .iter()
                .enumerate()
                .map(|(i, n)| Symbol::new(format!("p({n})"), SymbolKind::Momentum(i)))
                .collect(),
            parameters: Vec::new(),
            order,
        })
    }

    pub fn with_parameters(mut self, names: &[&str]) -> Result<Self, JetError> {
        for name in names {
            if RESERVED.contains(name) {
                return Err(JetError::ReservedName(name.to_string()));
            }
            if self.symbol(name).is_some() {
                return Err(JetError::DuplicateName(name.to_string()));
            }
            self.parameters.push(Symbol::parameter(*name));
        }
        Ok(self)
    }

    pub fn with_order(mut self, order: u32) -> Self {
        self.order = order;
        self
    }

    /// Base dimension `n`.
    pub fn n(&self) -> usize {
        self.base.len()
    }

    /// Number of fields `m`.
    pub fn m(&self) -> usize {
        self.fields.len()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn base(&self, l: usize) -> &Symbol {
        &self.base[l]
    }

    pub fn base_coords(&self) -> &[Symbol] {
        &self.base
    }

    pub fn tau(&self) -> &Symbol {
        &self.line
    }

    pub fn field(&self, i: usize) -> &Symbol {
        &self.fields[i]
    }

    pub fn fields(&self) -> &[Symbol] {
        &self.fields
    }

    pub fn momentum(&self, i: usize) -> &Symbol {
        &self.momenta[i]
    }

    pub fn momenta(&self) -> &[Symbol] {
        &self.momenta
    }

    pub fn parameters(&self) -> &[Symbol] {
        &self.parameters
    }

    pub fn parameter(&self, name: &str) -> Option<&Symbol> {
        self.parameters.iter().find(|p| p.name() == name)
    }

    pub fn field_index(&self, name: &str) -> Option<usize> {
        self.fields.iter().position(|f| f.name() == name)
    }

    /// Base directions followed by `τ`.
    pub fn directions(&self) -> Vec<Direction> {
        (0..self.n()).map(Direction::Base).chain(std::iter::once(Direction::Tau)).collect()
    }

    pub fn direction_symbol(&self, dir: Direction) -> &Symbol {
        match dir {
            Direction::Base(l) => &self.base[l],
            Direction::Tau => &self.line,
        }
    }

    pub fn direction_of(&self, s: &Symbol) -> Option<Direction> {
        match s.kind() {
            SymbolKind::BaseCoord(l) if self.base.get(*l) == Some(s) => Some(Direction::Base(*l)),
            SymbolKind::LineCoord if *s == self.line => Some(Direction::Tau),
            _ => None,
        }
    }

    fn direction_named(&self, name: &str) -> Option<Direction> {
        if self.line.name() == name {
            return Some(Direction::Tau);
        }
        self.base.iter().position(|b| b.name() == name).map(Direction::Base)
    }

    /// `y^i_α`; the zero multi-index gives the field itself.
    pub fn jet(&self, field: usize, index: &MultiIndex) -> Symbol {
        assert_eq!(index.dim(), self.n(), "multi-index dimension mismatch");
        if index.is_zero() {
            return self.fields[field].clone();
        }
        let mut name = format!("d({}", self.fields[field].name());
        for d in index.directions() {
            name.push_str(", ");
            name.push_str(self.direction_symbol(d).name());
        }
        name.push(')');
        Symbol::new(name, SymbolKind::JetCoord { field, index: index.clone() })
    }

    pub fn jet_along(&self, field: usize, dirs: &[Direction]) -> Symbol {
        self.jet(field, &MultiIndex::from_directions(self.n(), dirs))
    }

    /// `ẏ^i = y^i_τ`, the fiber coordinates of `J^Θ_1 Y`.
    pub fn velocity(&self, field: usize) -> Symbol {
        self.jet_along(field, &[Direction::Tau])
    }

    pub fn velocities(&self) -> Vec<Symbol> {
        (0..self.m()).map(|i| self.velocity(i)).collect()
    }

    /// `(field, α)` when `s` is a field or jet coordinate of this space.
    pub fn jet_parts(&self, s: &Symbol) -> Option<(usize, MultiIndex)> {
        match s.kind() {
            SymbolKind::Field(i) if self.fields.get(*i) == Some(s) => Some((*i, MultiIndex::zero(self.n()))),
            SymbolKind::JetCoord { field, index } if *field < self.m() && index.dim() == self.n() => {
                Some((*field, index.clone()))
            }
            _ => None,
        }
    }

    /// `y^i_α ↦ y^i_{α+dir}`.
    pub fn shifted(&self, s: &Symbol, dir: Direction) -> Option<Symbol> {
        let (i, a) = self.jet_parts(s)?;
        Some(self.jet(i, &a.shifted(dir)))
    }

    /// All `y^i_α` with `|α| + τ-order ≤ r`, fields included.
    pub fn jet_coordinates(&self, r: u32) -> Vec<Symbol> {
        let mut out = Vec::new();
        for k in 0..=r {
            for a in MultiIndex::all_of_order(self.n(), k) {
                for i in 0..self.m() {
                    out.push(self.jet(i, &a));
                }
            }
        }
        out
    }

    /// `m · C(n + 1 + r, r)`: fiber coordinates of `J_r` over the `n + 1`
    /// directions `(x^λ, τ)`.
    pub fn jet_coordinate_count(n: usize, m: usize, r: u32) -> u64 {
        m as u64 * binomial(n as u64 + 1 + r as u64, r as u64)
    }

    /// Highest total order among the jet coordinates of `syms`.
    pub fn max_order<'a>(&self, syms: impl IntoIterator<Item = &'a Symbol>) -> u32 {
        syms.into_iter().filter_map(|s| self.jet_parts(s)).map(|(_, a)| a.total_order()).max().unwrap_or(0)
    }

    /// Base coordinates, `τ` and parameters: symbols a section may depend on.
    pub fn is_base_symbol(&self, s: &Symbol) -> bool {
        s.is_parameter() || self.direction_of(s).is_some()
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.base
            .iter()
            .chain(std::iter::once(&self.line))
            .chain(self.fields.iter())
            .chain(self.parameters.iter())
            .find(|s| s.name() == name)
            .cloned()
    }
}

impl Resolver for JetSpace {
    fn symbol(&self, name: &str) -> Option<Symbol> {
        JetSpace::symbol(self, name)
    }

    fn jet(&self, field: &str, coords: &[String]) -> Result<Symbol, String> {
        let i = self.field_index(field).ok_or_else(|| format!("`{field}` is not a field"))?;
        let mut dirs = Vec::with_capacity(coords.len());
        for c in coords {
            dirs.push(self.direction_named(c).ok_or_else(|| format!("`{c}` is not a coordinate"))?);
        }
        Ok(self.jet_along(i, &dirs))
    }

    fn momentum(&self, field: &str) -> Option<Symbol> {
        self.field_index(field).map(|i| self.momenta[i].clone())
    }
}
