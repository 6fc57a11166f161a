//! Text parser for polynomials and rational functions.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | base ('^' uint)?
//! base   := int | var | '(' expr ')'
//! var    := 'z' uint          (1-indexed)
//!         | 'z' | 't'         (aliases for z1 when nvars = 1)
//! ```
//!
//! Whitespace is insignificant. `/` is rejected by [`parse_poly`] and accepted
//! by [`parse_rational`].

use num_bigint::BigInt;

use super::poly::MultiPoly;
use super::rational::RationalFunction;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
enum Expr {
    Int(BigInt),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, u32),
}

fn tokenize(text: &str, nvars: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => {
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().map(|(_, c)| c).collect();
                let n: BigInt = digits.parse().expect("digits parse");
                out.push((Tok::Int(n), pos));
            }
            'z' => {
                i += 1;
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().map(|(_, c)| c).collect();
                if digits.is_empty() && nvars == 1 {
                    out.push((Tok::Var(0), pos));
                    continue;
                }
                let index: usize = match digits.parse() {
                    Ok(k) => k,
                    Err(_) => {
                        return Err(Error::UnknownVariable { name: format!("z{digits}"), pos });
                    }
                };
                if index == 0 || index > nvars {
                    return Err(Error::UnknownVariable { name: format!("z{digits}"), pos });
                }
                out.push((Tok::Var(index - 1), pos));
            }
            't' => {
                if nvars != 1 {
                    return Err(Error::UnknownVariable { name: "t".into(), pos });
                }
                out.push((Tok::Var(0), pos));
                i += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                let t = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    _ => Tok::RParen,
                };
                out.push((t, pos));
                i += 1;
            }
            c if c.is_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].1.is_alphanumeric() {
                    i += 1;
                }
                let name: String = chars[start..i].iter().map(|(_, c)| c).collect();
                return Err(Error::UnknownVariable { name, pos });
            }
            other => {
                return Err(Error::Syntax { pos, msg: format!("unexpected character `{other}`") });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        self.at += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = match self.peek() {
            Some(Tok::Plus) => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    let pos = self.pos();
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let e: u32 = n.try_into().map_err(|_| Error::Syntax {
                        pos,
                        msg: "exponent too large".into(),
                    })?;
                    return Ok(Expr::Pow(Box::new(base), e));
                }
                _ => {
                    return Err(Error::Syntax { pos, msg: "expected a nonnegative integer exponent".into() });
                }
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Expr::Int(n)),
            Some(Tok::Var(v)) => Ok(Expr::Var(v)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                let close = self.pos();
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(Error::Syntax { pos: close, msg: "expected `)`".into() }),
                }
            }
            Some(t) => Err(Error::Syntax { pos, msg: format!("unexpected token {t:?}") }),
            None => Err(Error::Syntax { pos, msg: "unexpected end of input".into() }),
        }
    }
}

fn parse_expr(text: &str, nvars: usize) -> Result<Expr> {
    let toks = tokenize(text, nvars)?;
    let mut p = Parser { toks, at: 0, end: text.len() };
    let e = p.expr()?;
    if p.at < p.toks.len() {
        return Err(Error::Syntax { pos: p.pos(), msg: "unexpected trailing input".into() });
    }
    Ok(e)
}

fn eval_poly(e: &Expr, nvars: usize) -> Result<MultiPoly> {
    Ok(match e {
        Expr::Int(n) => MultiPoly::constant(n.clone(), nvars),
        Expr::Var(v) => MultiPoly::var(*v, nvars)?,
        Expr::Neg(a) => -eval_poly(a, nvars)?,
        Expr::Add(a, b) => eval_poly(a, nvars)? + eval_poly(b, nvars)?,
        Expr::Sub(a, b) => eval_poly(a, nvars)? - eval_poly(b, nvars)?,
        Expr::Mul(a, b) => eval_poly(a, nvars)? * eval_poly(b, nvars)?,
        Expr::Pow(a, k) => eval_poly(a, nvars)?.pow(*k),
        Expr::Div(_, _, pos) => return Err(Error::NonIntegerCoefficient { pos: *pos }),
    })
}

fn eval_rational(e: &Expr, nvars: usize) -> Result<RationalFunction> {
    Ok(match e {
        Expr::Int(n) => RationalFunction::from_int(n.clone(), nvars),
        Expr::Var(v) => RationalFunction::from_poly(MultiPoly::var(*v, nvars)?),
        Expr::Neg(a) => eval_rational(a, nvars)?.neg(),
        Expr::Add(a, b) => eval_rational(a, nvars)?.add(&eval_rational(b, nvars)?),
        Expr::Sub(a, b) => eval_rational(a, nvars)?.sub(&eval_rational(b, nvars)?),
        Expr::Mul(a, b) => eval_rational(a, nvars)?.mul(&eval_rational(b, nvars)?),
        Expr::Pow(a, k) => eval_rational(a, nvars)?.pow(*k),
        Expr::Div(a, b, _) => eval_rational(a, nvars)?.div(&eval_rational(b, nvars)?)?,
    })
}

/// Parses and expands a polynomial in `z1, …, z_nvars`.
pub fn parse_poly(text: &str, nvars: usize) -> Result<MultiPoly> {
    eval_poly(&parse_expr(text, nvars)?, nvars)
}

/// Parses a rational function; division is allowed anywhere.
pub fn parse_rational(text: &str, nvars: usize) -> Result<RationalFunction> {
    eval_rational(&parse_expr(text, nvars)?, nvars)
}

/// Splits a bracketed, comma-separated list such as `"[f0, f1]"` or `"(x, y)"`
/// at top-level commas.
pub fn split_list(text: &str) -> Result<Vec<String>> {
    let t = text.trim();
    let inner = match (t.chars().next(), t.chars().last()) {
        (Some('['), Some(']')) | (Some('('), Some(')')) if t.len() >= 2 => &t[1..t.len() - 1],
        _ => {
            return Err(Error::Syntax { pos: 0, msg: "expected a bracketed list like `[a, b]`".into() });
        }
    };
    let mut items = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in inner.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c);
            }
            ')' => {
                depth -= 1;
                cur.push(c);
            }
            ',' if depth == 0 => {
                items.push(std::mem::take(&mut cur).trim().to_string());
            }
            _ => cur.push(c),
        }
    }
    if !cur.trim().is_empty() || !items.is_empty() {
        items.push(cur.trim().to_string());
    }
    if items.iter().any(String::is_empty) {
        return Err(Error::Syntax { pos: 0, msg: "empty list entry".into() });
    }
    Ok(items)
}
