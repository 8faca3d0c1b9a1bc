use std::collections::{BTreeMap, BTreeSet};

use super::expr::{Expr, Node};
use super::simplify::simplify;
use super::{Symbol, SymbolError};

pub type Bindings = BTreeMap<Symbol, Expr>;

fn replace(e: &Expr, bindings: &Bindings) -> Expr {
    match e.node() {
        Node::Number(_) => e.clone(),
        Node::Sym(s) => bindings.get(s).cloned().unwrap_or_else(|| e.clone()),
        Node::Sum(v) => Expr::sum(v.iter().map(|t| replace(t, bindings)).collect()),
        Node::Product(v) => Expr::product(v.iter().map(|t| replace(t, bindings)).collect()),
        Node::Power(b, k) => replace(b, bindings).pow(k.clone()),
        Node::Apply(f, a) => Expr::apply(*f, replace(a, bindings)),
    }
}

/// Simultaneous substitution followed by simplification: every occurrence of
/// a bound symbol is replaced by its image in one pass, so images are never
/// substituted into again and `{x → y, y → x}` swaps.
pub fn substitute(e: &Expr, bindings: &Bindings) -> Expr {
    if bindings.is_empty() {
        return simplify(e);
    }
    simplify(&replace(e, bindings))
}

/// Substitution where images may refer to other bound symbols; bindings are
/// resolved transitively first, which requires the binding graph to be acyclic.
pub fn substitute_nested(e: &Expr, bindings: &Bindings) -> Result<Expr, SymbolError> {
    let resolved = resolve_bindings(bindings)?;
    Ok(substitute(e, &resolved))
}

/// Closes a binding map under itself. Fails with `CyclicBinding` when a bound
/// symbol depends on itself through the chain of images.
pub fn resolve_bindings(bindings: &Bindings) -> Result<Bindings, SymbolError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Visiting,
        Done,
    }
    fn visit(
        s: &Symbol,
        bindings: &Bindings,
        marks: &mut BTreeMap<Symbol, Mark>,
        out: &mut Bindings,
    ) -> Result<(), SymbolError> {
        match marks.get(s) {
            Some(Mark::Done) => return Ok(()),
            Some(Mark::Visiting) => {
                return Err(SymbolError::CyclicBinding(s.name().to_string()));
            }
            None => {}
        }
        marks.insert(s.clone(), Mark::Visiting);
        let image = &bindings[s];
        let deps: BTreeSet<Symbol> =
            image.symbols().into_iter().filter(|d| bindings.contains_key(d)).collect();
        for d in &deps {
            visit(d, bindings, marks, out)?;
        }
        let sub: Bindings = deps.iter().map(|d| (d.clone(), out[d].clone())).collect();
        out.insert(s.clone(), substitute(image, &sub));
        marks.insert(s.clone(), Mark::Done);
        Ok(())
    }
    let mut marks = BTreeMap::new();
    let mut out = Bindings::new();
    for s in bindings.keys() {
        visit(s, bindings, &mut marks, &mut out)?;
    }
    Ok(out)
}

/// Convenience constructor for a single binding.
pub fn bind(s: &Symbol, e: Expr) -> Bindings {
    let mut b = Bindings::new();
    b.insert(s.clone(), e);
    b
}
