//! Polynomial expression grammar shared by the CLI and the JSON formats.
//!
//! ```text
//! expr     := ['-'] term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := rational | name | name '^' nat | '(' expr ')'
//! rational := int | int '/' posint
//! ```
//!
//! Names are alphanumeric identifiers starting with a letter; `w` is the
//! generator of a quadratic coefficient field. Whitespace is ignored.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Name reserved for the quadratic generator.
pub const GENERATOR: &str = "w";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Rational { num: BigUint, den: BigUint },
    Power { name: String, exp: u32 },
    Product(Vec<Expr>),
    /// Signed summands, `true` meaning subtracted.
    Sum(Vec<(bool, Expr)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigUint),
    Name(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = BigUint::parse_bytes(&bytes[start..i], 10).expect("ascii digits");
            out.push((start, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Name(src[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Parse { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.offset(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = Vec::new();
        let first_neg = self.eat('-');
        terms.push((first_neg, self.term()?));
        loop {
            if self.eat('+') {
                terms.push((false, self.term()?));
            } else if self.eat('-') {
                terms.push((true, self.term()?));
            } else {
                break;
            }
        }
        if terms.len() == 1 && !terms[0].0 {
            return Ok(terms.pop().unwrap().1);
        }
        Ok(Expr::Sum(terms))
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.factor()?];
        while self.eat('*') {
            factors.push(self.factor()?);
        }
        if factors.len() == 1 {
            return Ok(factors.pop().unwrap());
        }
        Ok(Expr::Product(factors))
    }

    fn factor(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Int(num)) => {
                self.pos += 1;
                if self.eat('/') {
                    match self.peek().cloned() {
                        Some(Tok::Int(den)) if !den.is_zero() => {
                            self.pos += 1;
                            Ok(Expr::Rational { num, den })
                        }
                        _ => self.err("expected positive integer denominator"),
                    }
                } else {
                    Ok(Expr::Rational { num, den: BigUint::from(1u32) })
                }
            }
            Some(Tok::Name(name)) => {
                self.pos += 1;
                let exp = if self.eat('^') {
                    match self.peek().cloned() {
                        Some(Tok::Int(e)) => {
                            self.pos += 1;
                            match u32::try_from(e) {
                                Ok(e) => e,
                                Err(_) => return self.err("exponent too large"),
                            }
                        }
                        _ => return self.err("expected exponent"),
                    }
                } else {
                    1
                };
                Ok(Expr::Power { name, exp })
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parse an expression into its syntax tree.
pub fn parse(src: &str) -> Result<Expr> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0, end: src.len() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

impl Expr {
    /// Variable names in order of first appearance, excluding the generator.
    pub fn variables(&self) -> Vec<String> {
        fn walk(e: &Expr, out: &mut Vec<String>) {
            match e {
                Expr::Rational { .. } => {}
                Expr::Power { name, .. } => {
                    if name != GENERATOR && !out.contains(name) {
                        out.push(name.clone());
                    }
                }
                Expr::Product(fs) => fs.iter().for_each(|f| walk(f, out)),
                Expr::Sum(ts) => ts.iter().for_each(|(_, t)| walk(t, out)),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}
