use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Symbol;

/// Builtin functions. `sqrt` is not listed: it is the power `^(1/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "exp" => Some(Func::Exp),
            "ln" => Some(Func::Ln),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Number(BigRational),
    Sym(Symbol),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Power(Expr, BigRational),
    Apply(Func, Expr),
}

/// Immutable symbolic expression. Arithmetic operators build the raw tree;
/// [`simplify`](super::simplify) brings it to canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Expr(Arc<Node>);

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Expr {
    pub fn from_node(node: Node) -> Self {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn zero() -> Self {
        Expr::number(BigRational::zero())
    }

    pub fn one() -> Self {
        Expr::number(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        Expr::number(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn rational(n: i64, d: i64) -> Self {
        Expr::number(rat(n, d))
    }

    pub fn number(q: BigRational) -> Self {
        Expr::from_node(Node::Number(q))
    }

    pub fn sym(s: &Symbol) -> Self {
        Expr::from_node(Node::Sym(s.clone()))
    }

    pub fn sum(terms: Vec<Expr>) -> Self {
        match terms.len() {
            0 => Expr::zero(),
            1 => terms.into_iter().next().unwrap(),
            _ => Expr::from_node(Node::Sum(terms)),
        }
    }

    pub fn product(factors: Vec<Expr>) -> Self {
        match factors.len() {
            0 => Expr::one(),
            1 => factors.into_iter().next().unwrap(),
            _ => Expr::from_node(Node::Product(factors)),
        }
    }

    pub fn pow(&self, exponent: BigRational) -> Self {
        Expr::from_node(Node::Power(self.clone(), exponent))
    }

    pub fn powi(&self, exponent: i64) -> Self {
        self.pow(BigRational::from_integer(BigInt::from(exponent)))
    }

    pub fn sqrt(&self) -> Self {
        self.pow(rat(1, 2))
    }

    pub fn recip(&self) -> Self {
        self.powi(-1)
    }

    pub fn apply(f: Func, arg: Expr) -> Self {
        Expr::from_node(Node::Apply(f, arg))
    }

    pub fn sin(&self) -> Self {
        Expr::apply(Func::Sin, self.clone())
    }

    pub fn cos(&self) -> Self {
        Expr::apply(Func::Cos, self.clone())
    }

    pub fn exp(&self) -> Self {
        Expr::apply(Func::Exp, self.clone())
    }

    pub fn ln(&self) -> Self {
        Expr::apply(Func::Ln, self.clone())
    }

    pub fn as_number(&self) -> Option<&BigRational> {
        match self.node() {
            Node::Number(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_symbol(&self) -> Option<&Symbol> {
        match self.node() {
            Node::Sym(s) => Some(s),
            _ => None,
        }
    }

    /// Literal zero. Only meaningful on simplified expressions; see [`is_zero`](super::is_zero).
    pub fn is_literal_zero(&self) -> bool {
        self.as_number().is_some_and(|q| q.is_zero())
    }

    pub fn is_literal_one(&self) -> bool {
        self.as_number().is_some_and(|q| q.is_one())
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        match self.node() {
            Node::Number(_) => {}
            Node::Sym(s) => {
                out.insert(s.clone());
            }
            Node::Sum(v) | Node::Product(v) => v.iter().for_each(|e| e.collect_symbols(out)),
            Node::Power(b, _) => b.collect_symbols(out),
            Node::Apply(_, a) => a.collect_symbols(out),
        }
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        match self.node() {
            Node::Number(_) => false,
            Node::Sym(t) => t == s,
            Node::Sum(v) | Node::Product(v) => v.iter().any(|e| e.contains(s)),
            Node::Power(b, _) => b.contains(s),
            Node::Apply(_, a) => a.contains(s),
        }
    }

    pub fn contains_any(&self, pred: &dyn Fn(&Symbol) -> bool) -> bool {
        match self.node() {
            Node::Number(_) => false,
            Node::Sym(t) => pred(t),
            Node::Sum(v) | Node::Product(v) => v.iter().any(|e| e.contains_any(pred)),
            Node::Power(b, _) => b.contains_any(pred),
            Node::Apply(_, a) => a.contains_any(pred),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self.node() {
            Node::Number(_) | Node::Sym(_) => 1,
            Node::Sum(v) | Node::Product(v) => 1 + v.iter().map(Expr::size).sum::<usize>(),
            Node::Power(b, _) => 1 + b.size(),
            Node::Apply(_, a) => 1 + a.size(),
        }
    }

    pub(crate) fn is_negative_number(&self) -> bool {
        self.as_number().is_some_and(|q| q.is_negative())
    }
}

impl From<&Symbol> for Expr {
    fn from(s: &Symbol) -> Self {
        Expr::sym(s)
    }
}

impl From<Symbol> for Expr {
    fn from(s: Symbol) -> Self {
        Expr::sym(&s)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<BigRational> for Expr {
    fn from(q: BigRational) -> Self {
        Expr::number(q)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self, rhs)
            }
        }
        impl $trait<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                self.$method(rhs.clone())
            }
        }
        impl $trait<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                self.clone().$method(rhs)
            }
        }
        impl $trait<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                self.clone().$method(rhs.clone())
            }
        }
        impl $trait<i64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: i64) -> Expr {
                self.$method(Expr::int(rhs))
            }
        }
        impl $trait<i64> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: i64) -> Expr {
                self.clone().$method(Expr::int(rhs))
            }
        }
    };
}

binop!(Add, add, |a, b| Expr::sum(vec![a, b]));
binop!(Sub, sub, |a, b| Expr::sum(vec![a, -b]));
binop!(Mul, mul, |a, b| Expr::product(vec![a, b]));
binop!(Div, div, |a, b| Expr::product(vec![a, b.recip()]));

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        match self.node() {
            Node::Number(q) => Expr::number(-q.clone()),
            _ => Expr::product(vec![Expr::int(-1), self]),
        }
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -self.clone()
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        Expr::sum(iter.collect())
    }
}

impl std::iter::Product for Expr {
    fn product<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        Expr::product(iter.collect())
    }
}
