use num_traits::One;

use super::expr::{Expr, Func, Node};
use super::simplify::simplify;
use super::Symbol;

/// Raw partial derivative; `None` stands for an exact zero so that unrelated
/// subtrees are never copied.
fn raw(e: &Expr, s: &Symbol) -> Option<Expr> {
    match e.node() {
        Node::Number(_) => None,
        Node::Sym(t) => (t == s).then(Expr::one),
        Node::Sum(terms) => {
            let parts: Vec<Expr> = terms.iter().filter_map(|t| raw(t, s)).collect();
            (!parts.is_empty()).then(|| Expr::sum(parts))
        }
        Node::Product(factors) => {
            let mut parts = Vec::new();
            for (i, f) in factors.iter().enumerate() {
                if let Some(df) = raw(f, s) {
                    let mut fs = factors.clone();
                    fs[i] = df;
                    parts.push(Expr::product(fs));
                }
            }
            (!parts.is_empty()).then(|| Expr::sum(parts))
        }
        Node::Power(b, k) => {
            let db = raw(b, s)?;
            let lowered = b.pow(k - num_rational::BigRational::one());
            Some(Expr::product(vec![Expr::number(k.clone()), lowered, db]))
        }
        Node::Apply(f, a) => {
            let da = raw(a, s)?;
            let outer = match f {
                Func::Sin => a.cos(),
                Func::Cos => -a.sin(),
                Func::Exp => a.exp(),
                Func::Ln => a.recip(),
            };
            Some(outer * da)
        }
    }
}

/// Exact partial derivative `∂e/∂s`, simplified. All symbols are independent
/// coordinates; in particular jet coordinates do not depend on their fields.
pub fn differentiate(e: &Expr, s: &Symbol) -> Expr {
    match raw(e, s) {
        Some(d) => simplify(&d),
        None => Expr::zero(),
    }
}
