//! Polynomial text grammar.
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := number | ident ['^' nat]
//! number := digits ['/' digits]
//! ```
//! Whitespace is insignificant. Coefficients may appear anywhere in a term and
//! are multiplied together.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{GradedRing, Monomial, Polynomial};
use crate::error::ParseError;
use crate::scalar::{Field, Rational};

pub fn parse_polynomial<C: Field>(src: &str, ring: &Arc<GradedRing>) -> Result<Polynomial<C>, ParseError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, ring };
    let terms = p.poly()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(ParseError::syntax(p.pos, "unexpected trailing input"));
    }
    let mut out = Vec::with_capacity(terms.len());
    for (m, q) in terms {
        let c = C::from_rational(&q).ok_or_else(|| ParseError::BadNumber(q.to_string()))?;
        out.push((m, c));
    }
    Ok(Polynomial::from_terms(ring, out))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Arc<GradedRing>,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn poly(&mut self) -> Result<Vec<(Monomial, Rational)>, ParseError> {
        let mut terms = Vec::new();
        let mut sign = Rational::one();
        match self.peek() {
            Some(b'-') => {
                sign = -sign;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            None => return Err(ParseError::syntax(self.pos, "empty expression")),
            _ => {}
        }
        loop {
            let (m, c) = self.term()?;
            terms.push((m, c * &sign));
            match self.peek() {
                Some(b'+') => {
                    sign = Rational::one();
                    self.pos += 1;
                }
                Some(b'-') => {
                    sign = -Rational::one();
                    self.pos += 1;
                }
                _ => break,
            }
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<(Monomial, Rational), ParseError> {
        let mut m = Monomial::one(self.ring.nvars());
        let mut c = Rational::one();
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_digit() => c *= self.number()?,
                Some(b) if b.is_ascii_alphabetic() || b == b'_' => {
                    let (i, e) = self.power()?;
                    m.exponents_mut()[i] += e;
                }
                _ => return Err(ParseError::syntax(self.pos, "expected a number or variable")),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((m, c))
    }

    fn digits(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ParseError::syntax(self.pos, "expected digits"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        s.parse().map_err(|_| ParseError::BadNumber(s.to_string()))
    }

    fn number(&mut self) -> Result<Rational, ParseError> {
        let start = self.pos;
        let n = self.digits()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let d = self.digits()?;
            if d.is_zero() {
                let text = String::from_utf8_lossy(&self.src[start..self.pos]).trim().to_string();
                return Err(ParseError::ZeroDenominator(text));
            }
            return Ok(Rational::new(n, d));
        }
        Ok(Rational::from_integer(n))
    }

    fn power(&mut self) -> Result<(usize, u32), ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let i = self.ring.index_of(name).ok_or_else(|| ParseError::UnknownVariable(name.to_string()))?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.digits()?;
            let e: u32 = (&e).try_into().map_err(|_| ParseError::BadNumber(e.to_string()))?;
            return Ok((i, e));
        }
        Ok((i, 1))
    }
}
