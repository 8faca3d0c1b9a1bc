//! Exact symbolic expressions: construction, canonical simplification,
//! differentiation, substitution, numeric evaluation, parsing and printing.

mod diff;
mod eval;
mod expr;
pub mod lex;
mod parse;
mod print;
mod simplify;
mod subst;
mod symbol;

use std::collections::BTreeMap;

pub use diff::differentiate;
pub use eval::{eval_numeric, CompiledExpr, Env};
pub use expr::{rat, Expr, Func, Node};
pub use parse::{parse_expr, ExprParser, ParseError, ParseErrorKind, Resolver, RESERVED};
pub use simplify::{coefficient, degree_in, equivalent, is_zero, simplify};
pub use subst::{bind, resolve_bindings, substitute, substitute_nested, Bindings};
pub use symbol::{Symbol, SymbolKind};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SymbolError {
    #[error("cyclic binding through `{0}`")]
    CyclicBinding(String),
    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),
    #[error("domain error: {0}")]
    DomainError(String),
}

/// A flat name → symbol table, enough to parse expressions that do not use
/// jet or momentum notation.
#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    symbols: BTreeMap<String, Symbol>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, s: Symbol) -> &mut Self {
        self.symbols.insert(s.name().to_string(), s);
        self
    }

    pub fn with_parameters(names: &[&str]) -> Self {
        let mut t = SymbolTable::new();
        for n in names {
            t.insert(Symbol::parameter(*n));
        }
        t
    }

    pub fn get(&self, name: &str) -> Option<&Symbol> {
        self.symbols.get(name)
    }
}

impl Resolver for SymbolTable {
    fn symbol(&self, name: &str) -> Option<Symbol> {
        self.symbols.get(name).cloned()
    }

    fn jet(&self, field: &str, _coords: &[String]) -> Result<Symbol, String> {
        Err(format!("`{field}` has no jet coordinates in this table"))
    }

    fn momentum(&self, _field: &str) -> Option<Symbol> {
        None
    }
}

#[cfg(test)]
mod tests;
