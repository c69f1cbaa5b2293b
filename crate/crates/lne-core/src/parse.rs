//! Polynomial expression parser.
//!
//! Grammar (no implicit multiplication; `2x` is a syntax error):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | atom ('^' integer)?
//! atom   := integer | 'i' | identifier | '(' expr ')'
//! ```
//!
//! `/` is exact division and must have a nonzero constant divisor, which is
//! how rationals like `1/2` and `3/4*i` enter. Variables are identifiers
//! other than `i`; when no variable list is supplied they are collected in
//! first-occurrence order.

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::ExactScalar;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(s) => format!("integer `{s}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let b = bytes[pos];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => pos += 1,
            b'+' => {
                toks.push((pos, Tok::Plus));
                pos += 1;
            }
            b'-' => {
                toks.push((pos, Tok::Minus));
                pos += 1;
            }
            b'*' => {
                toks.push((pos, Tok::Star));
                pos += 1;
            }
            b'/' => {
                toks.push((pos, Tok::Slash));
                pos += 1;
            }
            b'^' => {
                toks.push((pos, Tok::Caret));
                pos += 1;
            }
            b'(' => {
                toks.push((pos, Tok::LParen));
                pos += 1;
            }
            b')' => {
                toks.push((pos, Tok::RParen));
                pos += 1;
            }
            b'0'..=b'9' => {
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                // A digit run directly followed by a letter would be implicit
                // multiplication; reject it here with a clear message.
                if pos < bytes.len() && (bytes[pos].is_ascii_alphabetic() || bytes[pos] == b'_') {
                    return Err(Error::Parse {
                        offset: pos,
                        message: "implicit multiplication is not allowed; write `*`".into(),
                        expected: vec!["`*`".into(), "`+`".into(), "`-`".into(), "`^`".into()],
                    });
                }
                toks.push((start, Tok::Int(text[start..pos].to_string())));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = pos;
                while pos < bytes.len()
                    && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_')
                {
                    pos += 1;
                }
                toks.push((start, Tok::Ident(text[start..pos].to_string())));
            }
            _ => {
                return Err(Error::Parse {
                    offset: pos,
                    message: format!("unexpected character `{}`", &text[pos..pos + 1]),
                    expected: vec![],
                });
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    cursor: usize,
    end_offset: usize,
    vars: Vec<String>,
    fixed_vars: bool,
    text_len: usize,
    _text: &'a str,
}

const ATOM_EXPECTED: &[&str] = &["integer", "variable", "`i`", "`(`", "`-`"];

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.cursor).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks
            .get(self.cursor)
            .map(|(o, _)| *o)
            .unwrap_or(self.end_offset)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.cursor).map(|(_, t)| t.clone());
        if t.is_some() {
            self.cursor += 1;
        }
        t
    }

    fn err_here(&self, expected: &[&str]) -> Error {
        let found = match self.peek() {
            Some(t) => format!("found {}", t.describe()),
            None => "found end of input".into(),
        };
        Error::Parse {
            offset: self.offset().min(self.text_len),
            message: found,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn var_index(&mut self, name: &str, offset: usize) -> Result<usize> {
        if let Some(i) = self.vars.iter().position(|v| v == name) {
            return Ok(i);
        }
        if self.fixed_vars {
            return Err(Error::Parse {
                offset,
                message: format!(
                    "unknown variable `{name}` (declared: {})",
                    self.vars.join(", ")
                ),
                expected: vec![],
            });
        }
        self.vars.push(name.to_string());
        Ok(self.vars.len() - 1)
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = Ast::Add(Box::new(acc), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = Ast::Sub(Box::new(acc), Box::new(rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = Ast::Mul(Box::new(acc), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    let slash_at = self.offset();
                    self.bump();
                    let rhs = self.factor()?;
                    acc = Ast::Div(Box::new(acc), Box::new(rhs), slash_at);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Ast> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            let inner = self.factor()?;
            return Ok(Ast::Neg(Box::new(inner)));
        }
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let exp_at = self.offset();
            match self.bump() {
                Some(Tok::Int(digits)) => {
                    let e: u32 = digits.parse().map_err(|_| Error::Parse {
                        offset: exp_at,
                        message: format!("exponent `{digits}` is too large"),
                        expected: vec![],
                    })?;
                    Ok(Ast::Pow(Box::new(base), e))
                }
                _ => {
                    self.cursor = self.cursor.saturating_sub(1);
                    Err(self.err_here(&["nonnegative integer exponent"]))
                }
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Ast> {
        let offset = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(digits)) => {
                self.bump();
                Ok(Ast::Int(digits))
            }
            Some(Tok::Ident(name)) => {
                self.bump();
                if name == "i" {
                    Ok(Ast::ImaginaryUnit)
                } else {
                    let idx = self.var_index(&name, offset)?;
                    Ok(Ast::Var(idx))
                }
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.expr()?;
                if matches!(self.peek(), Some(Tok::RParen)) {
                    self.bump();
                    Ok(inner)
                } else {
                    Err(self.err_here(&["`)`"]))
                }
            }
            _ => Err(self.err_here(ATOM_EXPECTED)),
        }
    }
}

/// Syntax tree kept between the two passes: variables are only fully known
/// after the whole input is read, so evaluation waits until then.
enum Ast {
    Int(String),
    ImaginaryUnit,
    Var(usize),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>, usize),
    Pow(Box<Ast>, u32),
}

fn build(ast: &Ast, vars: &[String]) -> Result<Polynomial> {
    Ok(match ast {
        Ast::Int(digits) => {
            let n: num_bigint::BigInt = digits.parse().expect("digit run");
            Polynomial::constant(
                vars,
                ExactScalar::from_real(num_rational::BigRational::from_integer(n)),
            )
        }
        Ast::ImaginaryUnit => Polynomial::constant(vars, ExactScalar::i()),
        Ast::Var(idx) => Polynomial::variable(vars, *idx)?,
        Ast::Neg(inner) => -build(inner, vars)?,
        Ast::Add(a, b) => build(a, vars)? + build(b, vars)?,
        Ast::Sub(a, b) => build(a, vars)? - build(b, vars)?,
        Ast::Mul(a, b) => build(a, vars)? * build(b, vars)?,
        Ast::Div(a, b, slash_at) => {
            let denom = build(b, vars)?;
            if !denom.is_constant() {
                return Err(Error::Parse {
                    offset: *slash_at,
                    message: "division by a non-constant expression".into(),
                    expected: vec![],
                });
            }
            let c = denom.constant_term();
            if c.is_zero() {
                return Err(Error::Parse {
                    offset: *slash_at,
                    message: "division by zero".into(),
                    expected: vec![],
                });
            }
            build(a, vars)?.scale(&c.inv().expect("nonzero constant"))
        }
        Ast::Pow(base, e) => build(base, vars)?.pow(*e),
    })
}

/// Parse `text` into a [`Polynomial`]. With `variables` supplied the result
/// uses exactly that list and unknown names are rejected; otherwise the list
/// is inferred in first-occurrence order.
pub fn parse_polynomial(text: &str, variables: Option<&[String]>) -> Result<Polynomial> {
    let toks = tokenize(text)?;
    let mut parser = Parser {
        toks,
        cursor: 0,
        end_offset: text.len(),
        vars: variables.map(|v| v.to_vec()).unwrap_or_default(),
        fixed_vars: variables.is_some(),
        text_len: text.len(),
        _text: text,
    };
    if variables.is_some() {
        let mut seen = std::collections::BTreeSet::new();
        for v in &parser.vars {
            if v == "i" {
                return Err(Error::structural("`i` is reserved for the imaginary unit"));
            }
            if !seen.insert(v.clone()) {
                return Err(Error::structural(format!("duplicate variable `{v}`")));
            }
        }
    }
    if parser.peek().is_none() {
        return Err(Error::Parse {
            offset: 0,
            message: "empty input".into(),
            expected: ATOM_EXPECTED.iter().map(|s| s.to_string()).collect(),
        });
    }
    let ast = parser.expr()?;
    if parser.peek().is_some() {
        return Err(parser.err_here(&["`+`", "`-`", "`*`", "`/`", "`^`", "end of input"]));
    }
    let vars = parser.vars.clone();
    build(&ast, &vars)
}
