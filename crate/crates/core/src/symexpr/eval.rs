use std::collections::HashMap;

use num_traits::ToPrimitive;

use super::expr::{Expr, Func, Node};
use super::{Symbol, SymbolError};

pub type Env = HashMap<Symbol, f64>;

fn pow_checked(base: f64, exp: f64, exp_is_integer: bool) -> Result<f64, SymbolError> {
    if base == 0.0 && exp < 0.0 {
        return Err(SymbolError::DomainError("division by zero".into()));
    }
    if !exp_is_integer && base < 0.0 {
        return Err(SymbolError::DomainError(format!("fractional power of negative number {base}")));
    }
    Ok(if exp_is_integer { base.powi(exp as i32) } else { base.powf(exp) })
}

fn apply_checked(f: Func, x: f64) -> Result<f64, SymbolError> {
    match f {
        Func::Sin => Ok(x.sin()),
        Func::Cos => Ok(x.cos()),
        Func::Exp => Ok(x.exp()),
        Func::Ln => {
            if x <= 0.0 {
                Err(SymbolError::DomainError(format!("ln of non-positive number {x}")))
            } else {
                Ok(x.ln())
            }
        }
    }
}

/// IEEE double evaluation of `e`.
pub fn eval_numeric(e: &Expr, env: &Env) -> Result<f64, SymbolError> {
    let v = match e.node() {
        Node::Number(q) => q.to_f64().unwrap_or(f64::NAN),
        Node::Sym(s) => *env.get(s).ok_or_else(|| SymbolError::UnboundSymbol(s.name().to_string()))?,
        Node::Sum(v) => {
            let mut acc = 0.0;
            for t in v {
                acc += eval_numeric(t, env)?;
            }
            acc
        }
        Node::Product(v) => {
            let mut acc = 1.0;
            for t in v {
                acc *= eval_numeric(t, env)?;
            }
            acc
        }
        Node::Power(b, k) => {
            let base = eval_numeric(b, env)?;
            pow_checked(base, k.to_f64().unwrap_or(f64::NAN), k.is_integer())?
        }
        Node::Apply(f, a) => apply_checked(*f, eval_numeric(a, env)?)?,
    };
    if v.is_nan() {
        return Err(SymbolError::DomainError(format!("evaluation of {e} is undefined")));
    }
    Ok(v)
}

#[derive(Clone, Debug)]
enum Op {
    Const(f64),
    Slot(usize),
    Sum(Vec<Op>),
    Product(Vec<Op>),
    Powi(Box<Op>, i32),
    Powf(Box<Op>, f64),
    Apply(Func, Box<Op>),
}

/// An expression lowered once against a fixed slot layout, for hot loops.
#[derive(Clone, Debug)]
pub struct CompiledExpr {
    root: Op,
}

impl CompiledExpr {
    /// Every symbol of `e` must appear in `slots`; values are later read from
    /// the slice passed to [`eval`](Self::eval) at the same positions.
    pub fn compile(e: &Expr, slots: &[Symbol]) -> Result<Self, SymbolError> {
        fn lower(e: &Expr, slots: &[Symbol]) -> Result<Op, SymbolError> {
            Ok(match e.node() {
                Node::Number(q) => Op::Const(q.to_f64().unwrap_or(f64::NAN)),
                Node::Sym(s) => Op::Slot(
                    slots
                        .iter()
                        .position(|t| t == s)
                        .ok_or_else(|| SymbolError::UnboundSymbol(s.name().to_string()))?,
                ),
                Node::Sum(v) => Op::Sum(v.iter().map(|t| lower(t, slots)).collect::<Result<_, _>>()?),
                Node::Product(v) => {
                    Op::Product(v.iter().map(|t| lower(t, slots)).collect::<Result<_, _>>()?)
                }
                Node::Power(b, k) => {
                    let b = Box::new(lower(b, slots)?);
                    match k.to_integer().to_i32() {
                        Some(n) if k.is_integer() => Op::Powi(b, n),
                        _ => Op::Powf(b, k.to_f64().unwrap_or(f64::NAN)),
                    }
                }
                Node::Apply(f, a) => Op::Apply(*f, Box::new(lower(a, slots)?)),
            })
        }
        Ok(CompiledExpr { root: lower(e, slots)? })
    }

    pub fn eval(&self, values: &[f64]) -> Result<f64, SymbolError> {
        fn run(op: &Op, v: &[f64]) -> Result<f64, SymbolError> {
            Ok(match op {
                Op::Const(c) => *c,
                Op::Slot(i) => v[*i],
                Op::Sum(ts) => {
                    let mut acc = 0.0;
                    for t in ts {
                        acc += run(t, v)?;
                    }
                    acc
                }
                Op::Product(ts) => {
                    let mut acc = 1.0;
                    for t in ts {
                        acc *= run(t, v)?;
                    }
                    acc
                }
                Op::Powi(b, n) => pow_checked(run(b, v)?, *n as f64, true)?,
                Op::Powf(b, k) => pow_checked(run(b, v)?, *k, false)?,
                Op::Apply(f, a) => apply_checked(*f, run(a, v)?)?,
            })
        }
        let out = run(&self.root, values)?;
        if out.is_nan() {
            return Err(SymbolError::DomainError("compiled evaluation is undefined".into()));
        }
        Ok(out)
    }
}
