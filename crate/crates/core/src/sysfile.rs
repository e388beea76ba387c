//! The polynomial-system file format and the expression parser behind it.
//!
//! ```text
//! # comment
//! params m=2 n=2
//! poly X1 + 1 + Y1*X2
//! poly X2 + Y2*X1
//! ```
//!
//! Expressions: integers, rationals `a/b`, variables, `+ - * ^` and
//! parentheses. No implicit multiplication.

use crate::poly::{BigRat, MPoly, Vars};
use crate::solve::SystemInput;
use num_bigint::BigInt;
use num_traits::Zero;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    fn new(line: usize, col: usize, msg: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
}

fn lex(text: &str, line_no: usize) -> Result<Lexer, ParseError> {
    let mut toks = vec![];
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' => {
                i += 1;
            }
            '+' => {
                toks.push((Tok::Plus, line_no, col));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, line_no, col));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, line_no, col));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, line_no, col));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, line_no, col));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, line_no, col));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, line_no, col));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                toks.push((Tok::Int(BigInt::from_str(&s).unwrap()), line_no, col));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_')
                {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                toks.push((Tok::Ident(s), line_no, col));
            }
            other => {
                return Err(ParseError::new(
                    line_no,
                    col,
                    format!("unexpected character '{other}'"),
                ))
            }
        }
    }
    Ok(Lexer {
        toks,
        pos: 0,
        line: line_no,
        end_col: chars.len() + 1,
    })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }
    fn next(&mut self) -> Option<(Tok, usize, usize)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }
    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|(_, l, c)| (*l, *c))
            .unwrap_or((self.line, self.end_col))
    }
    fn err(&self, msg: impl Into<String>) -> ParseError {
        let (l, c) = self.here();
        ParseError::new(l, c, msg)
    }
}

struct Parser<'a> {
    lx: Lexer,
    vars: &'a Vars,
}

impl<'a> Parser<'a> {
    fn expr(&mut self) -> Result<MPoly<BigRat>, ParseError> {
        let mut negate = false;
        if matches!(self.lx.peek(), Some(Tok::Minus)) {
            self.lx.next();
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.lx.peek() {
                Some(Tok::Plus) => {
                    self.lx.next();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Tok::Minus) => {
                    self.lx.next();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly<BigRat>, ParseError> {
        let mut acc = self.factor()?;
        while matches!(self.lx.peek(), Some(Tok::Star)) {
            self.lx.next();
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MPoly<BigRat>, ParseError> {
        let base = self.base()?;
        if matches!(self.lx.peek(), Some(Tok::Caret)) {
            self.lx.next();
            match self.lx.next() {
                Some((Tok::Int(k), _, _)) => {
                    let k: u32 = k
                        .try_into()
                        .map_err(|_| self.lx.err("exponent out of range"))?;
                    Ok(base.pow(k))
                }
                _ => Err(self.lx.err("expected integer exponent after '^'")),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<MPoly<BigRat>, ParseError> {
        match self.lx.next() {
            Some((Tok::Int(a), _, _)) => {
                // optional rational a/b
                if matches!(self.lx.peek(), Some(Tok::Slash)) {
                    self.lx.next();
                    match self.lx.next() {
                        Some((Tok::Int(b), l, c)) => {
                            if Zero::is_zero(&b) {
                                return Err(ParseError::new(l, c, "zero denominator"));
                            }
                            Ok(MPoly::constant(self.vars, BigRat::new(a, b)))
                        }
                        _ => Err(self.lx.err("expected integer after '/'")),
                    }
                } else {
                    Ok(MPoly::constant(self.vars, BigRat::from_integer(a)))
                }
            }
            Some((Tok::Ident(name), l, c)) => match self.vars.index_of(&name) {
                Some(idx) => Ok(MPoly::var(self.vars, idx)),
                None => Err(ParseError::new(l, c, format!("unknown variable {name}"))),
            },
            Some((Tok::LParen, _, _)) => {
                let e = self.expr()?;
                match self.lx.next() {
                    Some((Tok::RParen, _, _)) => Ok(e),
                    _ => Err(self.lx.err("expected ')'")),
                }
            }
            Some((Tok::Minus, _, _)) => {
                // unary minus inside parentheses
                let e = self.factor()?;
                Ok(e.neg())
            }
            _ => Err(self.lx.err("expected a number, variable or '('")),
        }
    }
}

/// Parses one polynomial expression over the given variables.
pub fn parse_polynomial(
    text: &str,
    vars: &Vars,
    line_no: usize,
) -> Result<MPoly<BigRat>, ParseError> {
    let lx = lex(text, line_no)?;
    let mut p = Parser { lx, vars };
    let poly = p.expr()?;
    if p.lx.peek().is_some() {
        return Err(p.lx.err("trailing input after expression"));
    }
    Ok(poly)
}

/// Parses a polynomial with integer coefficients (rejects fractions).
pub fn parse_polynomial_int(
    text: &str,
    vars: &Vars,
    line_no: usize,
) -> Result<MPoly<BigInt>, ParseError> {
    let q = parse_polynomial(text, vars, line_no)?;
    let mut terms = Vec::with_capacity(q.num_terms());
    for (e, c) in q.terms() {
        if !num_traits::One::is_one(c.denom()) {
            return Err(ParseError::new(
                line_no,
                1,
                "fractional coefficient where an integer is required",
            ));
        }
        terms.push((e.clone(), c.numer().clone()));
    }
    Ok(MPoly::from_terms(vars, terms))
}

/// Parses a complete system file.
pub fn parse_system(text: &str) -> Result<SystemInput, ParseError> {
    let mut m: Option<usize> = None;
    let mut n: Option<usize> = None;
    let mut gens: Vec<MPoly<BigRat>> = vec![];
    let mut vars: Option<Vars> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("params") {
            for part in rest.split_whitespace() {
                let (k, v) = part
                    .split_once('=')
                    .ok_or_else(|| ParseError::new(line_no, 1, "expected key=value"))?;
                let v: usize = v
                    .parse()
                    .map_err(|_| ParseError::new(line_no, 1, format!("bad value for {k}")))?;
                match k {
                    "m" => m = Some(v),
                    "n" => n = Some(v),
                    _ => {
                        return Err(ParseError::new(
                            line_no,
                            1,
                            format!("unknown parameter {k}"),
                        ))
                    }
                }
            }
            vars = Some(Vars::yx(m.unwrap_or(0), n.unwrap_or(0)));
            continue;
        }
        if let Some(rest) = line.strip_prefix("poly") {
            let vars = vars.as_ref().ok_or_else(|| {
                ParseError::new(line_no, 1, "poly before params header")
            })?;
            let p = parse_polynomial(rest, vars, line_no)?;
            if p.is_zero() {
                return Err(ParseError::new(line_no, 1, "zero polynomial"));
            }
            gens.push(p);
            continue;
        }
        return Err(ParseError::new(line_no, 1, format!("unknown directive: {line}")));
    }
    let (Some(m), Some(n)) = (m, n) else {
        return Err(ParseError::new(1, 1, "missing params header with m and n"));
    };
    if gens.is_empty() {
        return Err(ParseError::new(1, 1, "no poly lines"));
    }
    Ok(SystemInput::new(m, n, gens))
}

/// Prints a system in the file format.
pub fn system_to_text(sys: &SystemInput) -> String {
    let mut out = format!("params m={} n={}\n", sys.m, sys.n);
    for g in &sys.gens {
        out.push_str("poly ");
        out.push_str(&g.to_canonical_string());
        out.push('\n');
    }
    out
}
