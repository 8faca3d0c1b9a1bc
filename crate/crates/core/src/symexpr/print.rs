use std::fmt::{self, Write};

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::expr::{Expr, Node};

const PREC_SUM: u8 = 1;
const PREC_PRODUCT: u8 = 2;
const PREC_POWER: u8 = 3;

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn needs_sign(e: &Expr) -> bool {
    match e.node() {
        Node::Number(q) => q.is_negative(),
        Node::Product(fs) => fs.first().is_some_and(|f| f.is_negative_number()),
        _ => false,
    }
}

fn negate_display(e: &Expr) -> Expr {
    match e.node() {
        Node::Number(q) => Expr::number(-q),
        Node::Product(fs) => {
            let c = -fs[0].as_number().unwrap();
            let mut rest = fs[1..].to_vec();
            if !c.is_one() {
                rest.insert(0, Expr::number(c));
            }
            Expr::product(rest)
        }
        _ => e.clone(),
    }
}

fn write_expr(out: &mut String, e: &Expr, prec: u8) {
    match e.node() {
        Node::Number(q) => {
            let s = fmt_rational(q);
            if (q.is_negative() && prec > PREC_SUM) || (!q.is_integer() && prec > PREC_PRODUCT) {
                write!(out, "({s})").unwrap();
            } else {
                out.push_str(&s);
            }
        }
        Node::Sym(s) => out.push_str(s.name()),
        Node::Apply(f, a) => {
            write!(out, "{}(", f.name()).unwrap();
            write_expr(out, a, 0);
            out.push(')');
        }
        Node::Sum(terms) => {
            let paren = prec > PREC_SUM;
            if paren {
                out.push('(');
            }
            for (k, t) in terms.iter().enumerate() {
                if k == 0 {
                    write_expr(out, t, PREC_SUM);
                } else if needs_sign(t) {
                    out.push_str(" - ");
                    write_expr(out, &negate_display(t), PREC_SUM + 1);
                } else {
                    out.push_str(" + ");
                    write_expr(out, t, PREC_SUM + 1);
                }
            }
            if paren {
                out.push(')');
            }
        }
        Node::Power(b, k) if k.is_negative() => {
            let paren = prec > PREC_PRODUCT;
            if paren {
                out.push('(');
            }
            out.push_str("1/");
            write_power(out, b, &-k);
            if paren {
                out.push(')');
            }
        }
        Node::Power(b, k) => write_power(out, b, k),
        Node::Product(fs) => write_product(out, fs, prec),
    }
}

fn write_base(out: &mut String, base: &Expr) {
    let bare = match base.node() {
        Node::Sym(_) | Node::Apply(..) => true,
        Node::Number(q) => q.is_integer() && !q.is_negative(),
        _ => false,
    };
    if bare {
        write_expr(out, base, 0);
    } else {
        out.push('(');
        write_expr(out, base, 0);
        out.push(')');
    }
}

fn write_power(out: &mut String, base: &Expr, k: &BigRational) {
    if k.is_one() {
        write_expr(out, base, PREC_POWER + 1);
    } else if *k == BigRational::new(1.into(), 2.into()) {
        out.push_str("sqrt(");
        write_expr(out, base, 0);
        out.push(')');
    } else {
        write_base(out, base);
        out.push('^');
        if k.is_integer() {
            write!(out, "{}", k.numer()).unwrap();
        } else {
            write!(out, "({})", fmt_rational(k)).unwrap();
        }
    }
}

fn write_product(out: &mut String, fs: &[Expr], prec: u8) {
    let (coef, rest) = match fs.first().and_then(|f| f.as_number()) {
        Some(q) => (q.clone(), &fs[1..]),
        None => (BigRational::one(), fs),
    };
    let mut numer: Vec<(Expr, BigRational)> = Vec::new();
    let mut denom: Vec<(Expr, BigRational)> = Vec::new();
    for f in rest {
        match f.node() {
            Node::Power(b, k) if k.is_negative() => denom.push((b.clone(), -k)),
            Node::Power(b, k) => numer.push((b.clone(), k.clone())),
            _ => numer.push((f.clone(), BigRational::one())),
        }
    }
    let paren = prec > PREC_PRODUCT;
    if paren {
        out.push('(');
    }
    if coef.is_negative() {
        out.push('-');
    }
    let n = coef.numer().abs();
    let d = coef.denom().clone();
    let mut first = true;
    if !n.is_one() || numer.is_empty() {
        write!(out, "{n}").unwrap();
        first = false;
    }
    for (b, k) in &numer {
        if !first {
            out.push('*');
        }
        first = false;
        if k.is_one() {
            write_expr(out, b, PREC_PRODUCT + 1);
        } else {
            write_power(out, b, k);
        }
    }
    // two or more sums under one bar would re-parse as the inverse of their
    // expanded product, so each goes under its own
    let sums = denom.iter().filter(|(b, _)| matches!(b.node(), Node::Sum(_))).count();
    let split: Vec<(Expr, BigRational)> = if sums > 1 {
        let (s, rest): (Vec<_>, Vec<_>) = denom.into_iter().partition(|(b, _)| matches!(b.node(), Node::Sum(_)));
        denom = rest;
        s
    } else {
        Vec::new()
    };
    let dcount = denom.len() + usize::from(!d.is_one());
    if dcount > 0 {
        out.push('/');
        if dcount > 1 {
            out.push('(');
        }
        let mut first = true;
        if !d.is_one() {
            write!(out, "{d}").unwrap();
            first = false;
        }
        for (b, k) in &denom {
            if !first {
                out.push('*');
            }
            first = false;
            if k.is_one() {
                write_expr(out, b, PREC_POWER + 1);
            } else {
                write_power(out, b, k);
            }
        }
        if dcount > 1 {
            out.push(')');
        }
    }
    for (b, k) in &split {
        out.push('/');
        write_power(out, b, k);
    }
    if paren {
        out.push(')');
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_expr(&mut s, self, 0);
        f.write_str(&s)
    }
}
