use std::collections::BTreeSet;

use crate::symexpr::lex::{tokenize, Pos, Tok, Token};
use num_traits::Signed;

use crate::symexpr::{simplify, Expr, ExprParser, Node, ParseError, ParseErrorKind, RESERVED};

use super::{split_theta_key, ConnectionBlock, Dynamics, ModelFile, Param};

/// Statement boundaries found in the first pass; expressions are parsed once
/// every declaration is known.
enum Stmt {
    Dynamics { lagrangian: bool, name: String, at: usize, pos: Pos },
    Gauge { name: String, at: usize, pos: Pos },
    Connection { name: String, pos: Pos, entries: Vec<(String, Pos, usize)> },
}

struct Cursor<'t> {
    toks: &'t [Token],
    i: usize,
}

impl<'t> Cursor<'t> {
    fn peek(&self) -> &Token {
        &self.toks[self.i]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if t.tok != Tok::Eof {
            self.i += 1;
        }
        t
    }

    fn skip_newlines(&mut self) {
        while self.peek().tok == Tok::Newline {
            self.i += 1;
        }
    }

    fn expect(&mut self, want: Tok) -> Result<Token, ParseError> {
        let t = self.bump();
        if t.tok == want {
            Ok(t)
        } else {
            Err(ParseError::syntax(t.pos, format!("expected {want}, found {}", t.tok)))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        let t = self.bump();
        match t.tok {
            Tok::Ident(s) => Ok((s, t.pos)),
            other => Err(ParseError::syntax(t.pos, format!("expected identifier, found {other}"))),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        let t = self.bump();
        match &t.tok {
            Tok::Ident(s) if s == kw => Ok(()),
            other => Err(ParseError::syntax(t.pos, format!("expected `{kw}`, found {other}"))),
        }
    }

    fn end_of_statement(&mut self) -> Result<(), ParseError> {
        let t = self.peek();
        match t.tok {
            Tok::Newline | Tok::Eof => Ok(()),
            ref other => Err(ParseError::syntax(t.pos, format!("expected end of line, found {other}"))),
        }
    }

    /// Skips an expression: up to a newline, `}` or end of input outside
    /// parentheses. Returns the index of its first token.
    fn skip_expr(&mut self) -> Result<usize, ParseError> {
        let start = self.i;
        let mut open: Vec<Pos> = Vec::new();
        loop {
            let t = self.peek().clone();
            match t.tok {
                Tok::Eof if !open.is_empty() => return Err(ParseError::syntax(open[open.len() - 1], "unclosed `(`")),
                Tok::Eof => break,
                Tok::Newline | Tok::RBrace if open.is_empty() => break,
                Tok::LParen => open.push(t.pos),
                Tok::RParen if open.is_empty() => return Err(ParseError::syntax(t.pos, "unmatched `)`")),
                Tok::RParen => {
                    open.pop();
                }
                _ => {}
            }
            self.i += 1;
        }
        if self.i == start {
            return Err(ParseError::syntax(self.peek().pos, "expected expression"));
        }
        Ok(start)
    }
}

struct Names {
    seen: BTreeSet<String>,
}

impl Names {
    fn declare(&mut self, name: &str, pos: Pos) -> Result<(), ParseError> {
        if RESERVED.contains(&name) {
            return Err(ParseError::syntax(pos, format!("`{name}` is a reserved name")));
        }
        if !self.seen.insert(name.to_string()) {
            return Err(ParseError::at(pos, ParseErrorKind::DuplicateDeclaration(name.to_string())));
        }
        Ok(())
    }
}

fn divides_by_zero(e: &Expr) -> bool {
    match e.node() {
        Node::Power(b, k) => (k.is_negative() && b.is_literal_zero()) || divides_by_zero(b),
        Node::Sum(xs) | Node::Product(xs) => xs.iter().any(divides_by_zero),
        Node::Apply(_, a) => divides_by_zero(a),
        Node::Number(_) | Node::Sym(_) => false,
    }
}

/// Parses and validates a model file.
pub fn parse_model(text: &str) -> Result<ModelFile, ParseError> {
    let toks = tokenize(text).map_err(|e| ParseError::syntax(e.pos, e.message))?;
    let mut c = Cursor { toks: &toks, i: 0 };
    c.skip_newlines();
    c.keyword("model")?;
    let t = c.bump();
    let name = match t.tok {
        Tok::Str(s) => s,
        other => return Err(ParseError::syntax(t.pos, format!("expected model name string, found {other}"))),
    };
    c.end_of_statement()?;

    let mut names = Names { seen: BTreeSet::new() };
    let mut base: Option<Vec<String>> = None;
    let mut line: Option<String> = None;
    let mut fields = Vec::new();
    let mut params = Vec::new();
    let mut stmts = Vec::new();

    loop {
        c.skip_newlines();
        let t = c.bump();
        let kw = match &t.tok {
            Tok::Eof => break,
            Tok::Ident(s) => s.clone(),
            other => return Err(ParseError::syntax(t.pos, format!("expected declaration, found {other}"))),
        };
        match kw.as_str() {
            "base" => {
                if base.is_some() {
                    return Err(ParseError::at(t.pos, ParseErrorKind::DuplicateDeclaration("base".into())));
                }
                c.keyword("dim")?;
                let dt = c.bump();
                let dim = match &dt.tok {
                    Tok::Number(q) if q.is_integer() => q.to_integer(),
                    other => return Err(ParseError::syntax(dt.pos, format!("expected dimension, found {other}"))),
                };
                c.keyword("coords")?;
                c.expect(Tok::LParen)?;
                let mut coords = Vec::new();
                loop {
                    let (n, p) = c.ident()?;
                    names.declare(&n, p)?;
                    coords.push(n);
                    if c.peek().tok == Tok::Comma {
                        c.bump();
                    } else {
                        break;
                    }
                }
                c.expect(Tok::RParen)?;
                if dim != coords.len().into() {
                    return Err(ParseError::syntax(dt.pos, format!("dim {dim} but {} coordinates", coords.len())));
                }
                base = Some(coords);
            }
            "line" => {
                if line.is_some() {
                    return Err(ParseError::at(t.pos, ParseErrorKind::DuplicateDeclaration("line".into())));
                }
                let (n, p) = c.ident()?;
                names.declare(&n, p)?;
                line = Some(n);
            }
            "field" => {
                let (n, p) = c.ident()?;
                names.declare(&n, p)?;
                fields.push(n);
            }
            "param" => {
                let (n, p) = c.ident()?;
                names.declare(&n, p)?;
                c.expect(Tok::Equals)?;
                let negative = c.peek().tok == Tok::Minus;
                if negative {
                    c.bump();
                }
                let vt = c.bump();
                let value = match vt.tok {
                    Tok::Number(q) if negative => -q,
                    Tok::Number(q) => q,
                    other => return Err(ParseError::syntax(vt.pos, format!("expected number, found {other}"))),
                };
                params.push(Param { name: n, value });
            }
            "lagrangian" | "hamiltonian" => {
                let (n, _) = c.ident()?;
                c.expect(Tok::Equals)?;
                let at = c.skip_expr()?;
                stmts.push(Stmt::Dynamics { lagrangian: kw == "lagrangian", name: n, at, pos: t.pos });
            }
            "gauge" => {
                let (n, _) = c.ident()?;
                c.expect(Tok::Equals)?;
                let at = c.skip_expr()?;
                stmts.push(Stmt::Gauge { name: n, at, pos: t.pos });
            }
            "connection" => {
                let (n, _) = c.ident()?;
                c.expect(Tok::LBrace)?;
                let mut entries = Vec::new();
                loop {
                    c.skip_newlines();
                    if c.peek().tok == Tok::RBrace {
                        c.bump();
                        break;
                    }
                    let (key, kp) = c.ident()?;
                    c.expect(Tok::Equals)?;
                    let at = c.skip_expr()?;
                    entries.push((key, kp, at));
                }
                stmts.push(Stmt::Connection { name: n, pos: t.pos, entries });
            }
            other => return Err(ParseError::syntax(t.pos, format!("unknown declaration `{other}`"))),
        }
        c.end_of_statement()?;
    }

    let mut model = ModelFile {
        name,
        base: base.unwrap_or_default(),
        line: line.unwrap_or_else(|| "tau".to_string()),
        fields,
        params,
        dynamics: Dynamics::Hamiltonian { name: String::new(), expr: Expr::zero() },
        gauge: None,
        connections: Vec::new(),
    };
    let space = model.space().map_err(|e| ParseError::syntax(Pos { line: 1, col: 1 }, e.to_string()))?;
    let parse_at = |at: usize| -> Result<Expr, ParseError> {
        let mut p = ExprParser::new(&toks, at, &space);
        let e = p.expr()?;
        let t = &toks[p.position()];
        match t.tok {
            Tok::Newline | Tok::Eof | Tok::RBrace => {
                let e = simplify(&e);
                if divides_by_zero(&e) {
                    return Err(ParseError::syntax(toks[at].pos, "expression divides by zero"));
                }
                Ok(e)
            }
            ref other => Err(ParseError::syntax(t.pos, format!("unexpected {other}"))),
        }
    };

    let mut dynamics = None;
    let mut has_theta = false;
    let mut has_gamma = false;
    for stmt in stmts {
        match stmt {
            Stmt::Dynamics { lagrangian, name, at, pos } => {
                if dynamics.is_some() {
                    return Err(ParseError::syntax(pos, "a model has exactly one lagrangian or hamiltonian"));
                }
                let expr = parse_at(at)?;
                dynamics = Some(if lagrangian {
                    Dynamics::Lagrangian { name, expr }
                } else {
                    Dynamics::Hamiltonian { name, expr }
                });
            }
            Stmt::Gauge { name, at, pos } => {
                if model.gauge.is_some() {
                    return Err(ParseError::at(pos, ParseErrorKind::DuplicateDeclaration("gauge".into())));
                }
                model.gauge = Some((name, parse_at(at)?));
            }
            Stmt::Connection { name, pos, entries } => {
                let mut keys = BTreeSet::new();
                let mut theta = None;
                let mut parsed = Vec::new();
                for (key, kp, at) in entries {
                    if !keys.insert(key.clone()) {
                        return Err(ParseError::at(kp, ParseErrorKind::DuplicateDeclaration(key)));
                    }
                    let is_theta = if split_theta_key(&space, &key).is_some() {
                        true
                    } else if model.base.contains(&key) {
                        false
                    } else {
                        return Err(ParseError::syntax(
                            kp,
                            format!("`{key}` is neither <field>_<coordinate> nor a base coordinate"),
                        ));
                    };
                    if *theta.get_or_insert(is_theta) != is_theta {
                        return Err(ParseError::syntax(kp, "connection block mixes Y→Θ and Θ→X coefficients"));
                    }
                    parsed.push((key, parse_at(at)?));
                }
                let is_theta = theta.unwrap_or(true);
                let dup = if is_theta { &mut has_theta } else { &mut has_gamma };
                if std::mem::replace(dup, true) {
                    return Err(ParseError::at(pos, ParseErrorKind::DuplicateDeclaration(format!("connection {name}"))));
                }
                model.connections.push(if is_theta {
                    ConnectionBlock::Theta { name, entries: parsed }
                } else {
                    ConnectionBlock::Gamma { name, entries: parsed }
                });
            }
        }
    }
    model.dynamics = dynamics
        .ok_or_else(|| ParseError::syntax(toks.last().unwrap().pos, "model needs a lagrangian or a hamiltonian"))?;
    Ok(model)
}
