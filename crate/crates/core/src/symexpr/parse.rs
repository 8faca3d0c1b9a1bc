use super::expr::{Expr, Func};
use super::lex::{tokenize, Pos, Tok, Token};
use super::simplify::simplify;
use super::Symbol;

/// Maps names in expression text to symbols.
pub trait Resolver {
    fn symbol(&self, name: &str) -> Option<Symbol>;
    /// `d(field, c_1, …, c_k)`; `Err` carries a message for the user.
    fn jet(&self, field: &str, coords: &[String]) -> Result<Symbol, String>;
    /// `p(field)`.
    fn momentum(&self, field: &str) -> Option<Symbol>;
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),
    #[error("duplicate declaration of `{0}`")]
    DuplicateDeclaration(String),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn syntax(pos: Pos, msg: impl Into<String>) -> Self {
        ParseError { line: pos.line, col: pos.col, kind: ParseErrorKind::Syntax(msg.into()) }
    }

    pub fn at(pos: Pos, kind: ParseErrorKind) -> Self {
        ParseError { line: pos.line, col: pos.col, kind }
    }
}

pub const RESERVED: &[&str] = &["d", "p", "sqrt", "sin", "cos", "exp", "ln"];

/// Recursive-descent expression parser over a token stream. Newlines end the
/// expression unless a parenthesis is open.
pub struct ExprParser<'t, 'r> {
    toks: &'t [Token],
    pub(crate) i: usize,
    depth: usize,
    resolver: &'r dyn Resolver,
}

impl<'t, 'r> ExprParser<'t, 'r> {
    pub fn new(toks: &'t [Token], start: usize, resolver: &'r dyn Resolver) -> Self {
        ExprParser { toks, i: start, depth: 0, resolver }
    }

    pub fn position(&self) -> usize {
        self.i
    }

    fn skip_nl(&mut self) {
        if self.depth > 0 {
            while self.toks[self.i].tok == Tok::Newline {
                self.i += 1;
            }
        }
    }

    fn peek(&mut self) -> &Token {
        self.skip_nl();
        &self.toks[self.i]
    }

    fn bump(&mut self) -> Token {
        self.skip_nl();
        let t = self.toks[self.i].clone();
        if t.tok != Tok::Eof {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Token, ParseError> {
        let t = self.bump();
        if t.tok == want {
            Ok(t)
        } else {
            Err(ParseError::syntax(t.pos, format!("expected {want}, found {}", t.tok)))
        }
    }

    /// Parses one expression; the result is not simplified.
    pub fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    terms.push(self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    terms.push(-self.term()?);
                }
                _ => break,
            }
        }
        Ok(Expr::sum(terms))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.unary()?];
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    factors.push(self.unary()?);
                }
                Tok::Slash => {
                    self.bump();
                    factors.push(self.unary()?.recip());
                }
                _ => break,
            }
        }
        Ok(Expr::product(factors))
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().tok {
            Tok::Minus => {
                self.bump();
                Ok(-self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.peek().pos;
        let exponent = simplify(&self.unary()?);
        match exponent.as_number() {
            Some(q) => Ok(base.pow(q.clone())),
            None => Err(ParseError::syntax(at, "exponent must be a rational constant")),
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        let t = self.bump();
        match t.tok {
            Tok::Ident(s) => Ok((s, t.pos)),
            other => Err(ParseError::syntax(t.pos, format!("expected identifier, found {other}"))),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let t = self.bump();
        match t.tok {
            Tok::Number(q) => Ok(Expr::number(q)),
            Tok::LParen => {
                self.depth += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                self.depth -= 1;
                Ok(e)
            }
            Tok::Ident(name) => {
                if self.toks[self.i].tok == Tok::LParen {
                    self.call(&name, t.pos)
                } else {
                    self.resolver
                        .symbol(&name)
                        .map(|s| Expr::sym(&s))
                        .ok_or_else(|| ParseError::at(t.pos, ParseErrorKind::UndeclaredSymbol(name)))
                }
            }
            other => Err(ParseError::syntax(t.pos, format!("expected expression, found {other}"))),
        }
    }

    fn call(&mut self, name: &str, pos: Pos) -> Result<Expr, ParseError> {
        self.bump();
        self.depth += 1;
        let out = match name {
            "d" => {
                let (field, fpos) = self.ident()?;
                let mut coords = Vec::new();
                while self.peek().tok == Tok::Comma {
                    self.bump();
                    coords.push(self.ident()?);
                }
                if coords.is_empty() {
                    return Err(ParseError::syntax(fpos, "d(...) needs at least one coordinate"));
                }
                let names: Vec<String> = coords.iter().map(|(c, _)| c.clone()).collect();
                let s = self.resolver.jet(&field, &names).map_err(|m| {
                    if self.resolver.symbol(&field).is_none() {
                        return ParseError::at(fpos, ParseErrorKind::UndeclaredSymbol(field.clone()));
                    }
                    match coords.iter().find(|(c, _)| self.resolver.symbol(c).is_none()) {
                        Some((c, cpos)) => ParseError::at(*cpos, ParseErrorKind::UndeclaredSymbol(c.clone())),
                        None => ParseError::syntax(fpos, m),
                    }
                })?;
                Expr::sym(&s)
            }
            "p" => {
                let (field, fpos) = self.ident()?;
                let s = self
                    .resolver
                    .momentum(&field)
                    .ok_or_else(|| ParseError::at(fpos, ParseErrorKind::UndeclaredSymbol(field)))?;
                Expr::sym(&s)
            }
            "sqrt" => self.expr()?.sqrt(),
            f => match Func::from_name(f) {
                Some(func) => Expr::apply(func, self.expr()?),
                None => return Err(ParseError::syntax(pos, format!("unknown function `{f}`"))),
            },
        };
        self.expect(Tok::RParen)?;
        self.depth -= 1;
        Ok(out)
    }
}

/// Parses a complete expression and simplifies it.
pub fn parse_expr(text: &str, resolver: &dyn Resolver) -> Result<Expr, ParseError> {
    let toks = tokenize(text).map_err(|e| ParseError::syntax(e.pos, e.message))?;
    let mut p = ExprParser::new(&toks, 0, resolver);
    let e = p.expr()?;
    let t = &toks[p.position()];
    if t.tok != Tok::Eof && t.tok != Tok::Newline {
        return Err(ParseError::syntax(t.pos, format!("unexpected {}", t.tok)));
    }
    Ok(simplify(&e))
}
