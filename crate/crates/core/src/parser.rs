//! Text form of bivariate polynomials.
//!
//! Grammar (whitespace is ignored between tokens):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (['*'] unary)*          -- '*' may be omitted
//! unary    := ('+' | '-')* power
//! power    := atom ['^' exponent]
//! atom     := number | 'x' | 'y' | 'i' | '(' expr ')'
//! number   := digits ['/' digits]
//! exponent := digits | '(' ['+' | '-'] digits ')'
//! ```
//!
//! Input is expanded on parse; [`format_poly`] writes the canonical form back.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{BiPoly, ExactComplex};

/// Largest exponent literal accepted.
pub const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at position {pos}: expected {expected}")]
    SyntaxError { pos: usize, expected: String },
    #[error("negative exponent at position {pos}")]
    NegativeExponent { pos: usize },
    #[error("non-integer exponent at position {pos}")]
    NonIntegerExponent { pos: usize },
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn syntax<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError::SyntaxError {
            pos: self.pos,
            expected: expected.to_string(),
        })
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.syntax(&format!("'{}'", c as char))
        }
    }

    fn expr(&mut self) -> Result<BiPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_factor(c: Option<u8>) -> bool {
        matches!(c, Some(b'0'..=b'9' | b'x' | b'y' | b'i' | b'('))
    }

    fn term(&mut self) -> Result<BiPoly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                c if Self::starts_factor(c) => {
                    acc = &acc * &self.unary()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<BiPoly, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<BiPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.exponent()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).ok()?;
        text.parse().ok()
    }

    fn small_exponent(&self, value: BigInt, pos: usize) -> Result<u32, ParseError> {
        match u32::try_from(value) {
            Ok(e) if e <= MAX_EXPONENT => Ok(e),
            _ => Err(ParseError::SyntaxError {
                pos,
                expected: format!("exponent at most {MAX_EXPONENT}"),
            }),
        }
    }

    /// After the integer part of an exponent: a '.' or '/' means a non-integer.
    fn reject_fraction(&mut self, pos: usize) -> Result<(), ParseError> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(b'.') | Some(b'/') => Err(ParseError::NonIntegerExponent { pos }),
            _ => Ok(()),
        }
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let pos = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let negative = match self.peek() {
                    Some(b'-') => {
                        self.pos += 1;
                        true
                    }
                    Some(b'+') => {
                        self.pos += 1;
                        false
                    }
                    _ => false,
                };
                let value = match self.digits() {
                    Some(v) => v,
                    None => return self.syntax("integer exponent"),
                };
                self.reject_fraction(pos)?;
                self.expect(b')')?;
                if negative && !value.is_zero() {
                    return Err(ParseError::NegativeExponent { pos });
                }
                self.small_exponent(value, pos)
            }
            Some(b'-') => {
                self.pos += 1;
                match self.digits() {
                    Some(_) => Err(ParseError::NegativeExponent { pos }),
                    None => self.syntax("integer exponent"),
                }
            }
            Some(b'.') => Err(ParseError::NonIntegerExponent { pos }),
            _ => {
                let value = match self.digits() {
                    Some(v) => v,
                    None => return self.syntax("integer exponent"),
                };
                self.reject_fraction(pos)?;
                self.small_exponent(value, pos)
            }
        }
    }

    fn atom(&mut self) -> Result<BiPoly, ParseError> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(BiPoly::x())
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(BiPoly::y())
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(BiPoly::constant(ExactComplex::i()))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b'0'..=b'9') => {
                let num = self.digits().expect("digit present");
                let mut value = BigRational::from_integer(num);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = match self.digits() {
                        Some(d) => d,
                        None => return self.syntax("denominator"),
                    };
                    if den.is_zero() {
                        return self.syntax("nonzero denominator");
                    }
                    value /= BigRational::from_integer(den);
                }
                if self.src.get(self.pos) == Some(&b'.') {
                    return self.syntax("rational literal (no decimal point)");
                }
                Ok(BiPoly::constant(ExactComplex::from_rational(value)))
            }
            _ => self.syntax("number, 'x', 'y', 'i' or '('"),
        }
    }
}

/// Parses and expands one polynomial.
pub fn parse_poly(src: &str) -> Result<BiPoly, ParseError> {
    let mut p = Parser::new(src);
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.syntax("operator or end of input");
    }
    Ok(out)
}

fn monomial_text(i: u32, j: u32) -> String {
    let part = |v: &str, e: u32| match e {
        0 => None,
        1 => Some(v.to_string()),
        _ => Some(format!("{v}^{e}")),
    };
    [part("x", i), part("y", j)]
        .into_iter()
        .flatten()
        .collect::<Vec<_>>()
        .join("*")
}

fn term_text(c: &ExactComplex, i: u32, j: u32) -> String {
    let mono = monomial_text(i, j);
    if mono.is_empty() {
        return c.to_string();
    }
    if c.is_one() {
        mono
    } else if (-c).is_one() {
        format!("-{mono}")
    } else {
        format!("{c}*{mono}")
    }
}

/// Canonical text: terms by total degree then x-degree, both descending.
pub fn format_poly(f: &BiPoly) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<_> = f.terms().collect();
    terms.sort_by(|a, b| {
        let (ia, ja) = *a.0;
        let (ib, jb) = *b.0;
        (ib + jb, ib).cmp(&(ia + ja, ia))
    });
    let mut out = String::new();
    for (k, (&(i, j), c)) in terms.into_iter().enumerate() {
        let text = term_text(c, i, j);
        if k == 0 {
            out.push_str(&text);
        } else if let Some(rest) = text.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&text);
        }
    }
    out
}

/// Splits a corpus into `(line number, text)` pairs, skipping blank lines and
/// `#` comments. Line numbers start at 1.
pub fn corpus_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}
