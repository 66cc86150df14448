//! Text grammar for polynomials in `x` and `t`.
//!
//! ```text
//! expr   := sign? term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := atom ("^" integer)?
//! atom   := integer | "x" | "t" | "(" expr ")"
//! ```
//!
//! Division is only allowed by nonzero rational constants, so `3/2*x` and
//! `(x + 1)/4` parse but `1/x` does not. Whitespace is ignored.

use num::traits::Zero;
use num::BigInt;

use super::bipoly::BiPoly;
use super::poly::UniPoly;
use super::scalar::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    X,
    T,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("ascii digits");
                out.push((start, Token::Int(n)));
                continue;
            }
            b'x' => Token::X,
            b't' => Token::T,
            b'+' => Token::Plus,
            b'-' => Token::Minus,
            b'*' => Token::Star,
            b'/' => Token::Slash,
            b'^' => Token::Caret,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            _ => {
                return Err(ParseError {
                    position: i,
                    message: format!("unexpected character {:?}", src[i..].chars().next().unwrap()),
                })
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { position: self.offset(), message: message.into() })
    }

    fn expr(&mut self) -> Result<BiPoly, ParseError> {
        let mut negate = false;
        match self.peek() {
            Some(Token::Plus) => self.pos += 1,
            Some(Token::Minus) => {
                self.pos += 1;
                negate = true;
            }
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BiPoly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let at = self.offset();
                    let divisor = self.factor()?;
                    match divisor.as_constant() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                        Some(_) => {
                            return Err(ParseError { position: at, message: "division by zero".into() })
                        }
                        None => {
                            return Err(ParseError {
                                position: at,
                                message: "division by a non-constant".into(),
                            })
                        }
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<BiPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Token::Int(n)) => {
                    self.pos += 1;
                    let e: u32 = match n.try_into() {
                        Ok(e) if e <= 256 => e,
                        _ => return self.error("exponent too large"),
                    };
                    return Ok(base.pow(e));
                }
                _ => return self.error("expected a nonnegative integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<BiPoly, ParseError> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return self.error("unexpected end of input"),
        };
        self.pos += 1;
        match tok {
            Token::Int(n) => Ok(BiPoly::constant(Rational::from_integer(n))),
            Token::X => Ok(BiPoly::x()),
            Token::T => Ok(BiPoly::t()),
            Token::LParen => {
                let inner = self.expr()?;
                if self.peek() != Some(&Token::RParen) {
                    return self.error("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => {
                self.pos -= 1;
                self.error("expected a number, variable or '('")
            }
        }
    }
}

/// Parses a polynomial in `x` and `t`.
pub fn parse_bipoly(src: &str) -> Result<BiPoly, ParseError> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0, end: src.len() };
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return p.error("trailing input");
    }
    Ok(out)
}

/// Parses a polynomial that must not involve `t`.
pub fn parse_unipoly(src: &str) -> Result<UniPoly, ParseError> {
    parse_bipoly(src)?.as_x_poly().ok_or_else(|| ParseError {
        position: 0,
        message: "expected a polynomial in x only".into(),
    })
}

/// Parses a rational constant such as `-3/2`.
pub fn parse_rational(src: &str) -> Result<Rational, ParseError> {
    parse_bipoly(src)?.as_constant().ok_or_else(|| ParseError {
        position: 0,
        message: "expected a rational constant".into(),
    })
}

/// Parses a polynomial in `t` only, returned as a univariate polynomial.
pub fn parse_t_poly(src: &str) -> Result<UniPoly, ParseError> {
    let b = parse_bipoly(src)?;
    let mut coeffs = Vec::new();
    for c in b.coeffs() {
        if !c.is_constant() {
            return Err(ParseError { position: 0, message: "expected a polynomial in t only".into() });
        }
        coeffs.push(c.coeff(0));
    }
    Ok(UniPoly::new(coeffs))
}
