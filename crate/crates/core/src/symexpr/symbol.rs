use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::jetcalc::MultiIndex;

/// What a symbol stands for in the coordinate system `(x^λ, τ, y^i_α, p̄_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    /// Base coordinate `x^λ`.
    BaseCoord(usize),
    /// Fiber coordinate `τ` of the line bundle.
    LineCoord,
    /// Field `y^i`.
    Field(usize),
    /// Jet coordinate `y^i_α` with non-zero multi-index.
    JetCoord { field: usize, index: MultiIndex },
    /// Momentum `p̄_i` conjugate to field `i`.
    Momentum(usize),
    /// A constant of the model.
    Parameter,
}

impl SymbolKind {
    fn rank(&self) -> u8 {
        match self {
            SymbolKind::Parameter => 0,
            SymbolKind::BaseCoord(_) => 1,
            SymbolKind::LineCoord => 2,
            SymbolKind::Field(_) => 3,
            SymbolKind::JetCoord { .. } => 4,
            SymbolKind::Momentum(_) => 5,
        }
    }

    fn indices(&self) -> (usize, Option<&MultiIndex>) {
        match self {
            SymbolKind::BaseCoord(l) => (*l, None),
            SymbolKind::Field(i) | SymbolKind::Momentum(i) => (*i, None),
            SymbolKind::JetCoord { field, index } => (*field, Some(index)),
            SymbolKind::LineCoord | SymbolKind::Parameter => (0, None),
        }
    }
}

#[derive(Debug)]
struct SymbolData {
    name: String,
    kind: SymbolKind,
}

/// A named coordinate or parameter. Cheap to clone; compared by name and kind.
#[derive(Clone)]
pub struct Symbol(Arc<SymbolData>);

impl Symbol {
    pub fn new(name: impl Into<String>, kind: SymbolKind) -> Self {
        Symbol(Arc::new(SymbolData { name: name.into(), kind }))
    }

    /// Shorthand for a parameter symbol.
    pub fn parameter(name: impl Into<String>) -> Self {
        Symbol::new(name, SymbolKind::Parameter)
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn kind(&self) -> &SymbolKind {
        &self.0.kind
    }

    pub fn is_parameter(&self) -> bool {
        matches!(self.0.kind, SymbolKind::Parameter)
    }

    pub fn is_momentum(&self) -> bool {
        matches!(self.0.kind, SymbolKind::Momentum(_))
    }

    /// Field or jet coordinate.
    pub fn is_jet_variable(&self) -> bool {
        matches!(self.0.kind, SymbolKind::Field(_) | SymbolKind::JetCoord { .. })
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.name == other.0.name && self.0.kind == other.0.kind)
    }
}

impl Eq for Symbol {}

impl Hash for Symbol {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.name.hash(state);
        self.0.kind.hash(state);
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        let (a, b) = (&self.0.kind, &other.0.kind);
        a.rank()
            .cmp(&b.rank())
            .then_with(|| self.0.name.cmp(&other.0.name))
            .then_with(|| a.indices().cmp(&b.indices()))
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.name)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.name)
    }
}
