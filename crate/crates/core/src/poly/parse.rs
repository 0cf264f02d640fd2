//! Parser for the polynomial input language.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := coeff ('*' factor)* | factor ('*' factor)*
//! factor := ('x'|'y') ('^' uint)?
//! coeff  := int | int '/' uint | '(' coeff ')'
//! ```
//!
//! Whitespace is insignificant. A leading sign on the first term and a sign
//! inside a parenthesised coefficient are accepted.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::sparse::SparsePoly;
use super::uni::{UniPoly, Var};
use crate::arith::Rational;
use crate::error::{Error, ParseError, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
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

    fn found(&mut self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(_) => {
                let s = std::str::from_utf8(&self.src[self.pos..]).unwrap_or("?");
                format!("'{}'", s.chars().next().unwrap_or('?'))
            }
        }
    }

    fn syntax(&mut self, expected: &[&str]) -> Error {
        let found = self.found();
        Error::Parse(ParseError::Syntax {
            position: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        })
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    fn coeff(&mut self) -> Result<Rational> {
        if self.eat(b'(') {
            let neg = self.eat(b'-');
            if !neg {
                self.eat(b'+');
            }
            let c = self.coeff()?;
            if !self.eat(b')') {
                return Err(self.syntax(&["')'"]));
            }
            return Ok(if neg { -c } else { c });
        }
        let num = self.uint().ok_or_else(|| self.syntax(&["integer", "'('"]))?;
        if self.eat(b'/') {
            let at = self.pos;
            let den = self.uint().ok_or_else(|| self.syntax(&["unsigned integer"]))?;
            if den.is_zero() {
                return Err(Error::Parse(ParseError::Syntax {
                    position: at,
                    expected: vec!["nonzero denominator".into()],
                    found: "0".into(),
                }));
            }
            return Ok(BigRational::new(num, den));
        }
        Ok(BigRational::from_integer(num))
    }

    fn factor(&mut self) -> Result<(u32, u32)> {
        self.skip_ws();
        let at = self.pos;
        let c = match self.src.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() => *c,
            _ => return Err(self.syntax(&["'x'", "'y'"])),
        };
        // identifiers are single letters; reject longer names as unknown
        let mut end = self.pos + 1;
        while end < self.src.len() && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_') {
            end += 1;
        }
        if end > self.pos + 1 || (c != b'x' && c != b'y') {
            let name = String::from_utf8_lossy(&self.src[self.pos..end]).into_owned();
            return Err(Error::Parse(ParseError::UnknownVariable { position: at, name }));
        }
        self.pos = end;
        let mut e: u32 = 1;
        if self.eat(b'^') {
            self.skip_ws();
            let estart = self.pos;
            let big = self.uint().ok_or_else(|| self.syntax(&["unsigned integer"]))?;
            e = u32::try_from(&big)
                .ok()
                .filter(|&v| v <= MAX_EXPONENT)
                .ok_or(Error::Parse(ParseError::ExponentOverflow { position: estart }))?;
        }
        Ok(if c == b'x' { (e, 0) } else { (0, e) })
    }

    fn term(&mut self) -> Result<SparsePoly> {
        let starts_factor = matches!(self.peek(), Some(c) if c.is_ascii_alphabetic());
        let (mut coeff, mut exp) = if starts_factor {
            (Rational::one(), self.factor()?)
        } else {
            (self.coeff()?, (0, 0))
        };
        while self.eat(b'*') {
            if !matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
                return Err(self.syntax(&["'x'", "'y'"]));
            }
            let (a, b) = self.factor()?;
            exp.0 = exp.0.checked_add(a).filter(|&v| v <= MAX_EXPONENT).ok_or(Error::Parse(ParseError::ExponentOverflow { position: self.pos }))?;
            exp.1 = exp.1.checked_add(b).filter(|&v| v <= MAX_EXPONENT).ok_or(Error::Parse(ParseError::ExponentOverflow { position: self.pos }))?;
        }
        if coeff.is_zero() {
            coeff = Rational::zero();
        }
        Ok(SparsePoly::monomial(exp.0, exp.1, coeff))
    }

    fn expr(&mut self) -> Result<SparsePoly> {
        let mut neg = false;
        if self.eat(b'-') {
            neg = true;
        } else {
            self.eat(b'+');
        }
        let first = self.term()?;
        let mut acc = if neg { first.neg() } else { first };
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                break;
            }
        }
        if self.peek().is_some() {
            return Err(self.syntax(&["'+'", "'-'", "'*'", "end of input"]));
        }
        Ok(acc)
    }
}

/// Exponents beyond this are rejected so that products stay in `u32`.
pub const MAX_EXPONENT: u32 = 1 << 20;

/// Parse the polynomial language; returns the canonical form.
pub fn parse_poly(text: &str) -> Result<SparsePoly> {
    parse_poly_exact(text).map(|p| p.canonical())
}

/// Parse without normalizing coefficients.
pub fn parse_poly_exact(text: &str) -> Result<SparsePoly> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    if p.peek().is_none() {
        return Err(p.syntax(&["term"]));
    }
    p.expr()
}

/// Parse a univariate polynomial written in `var` (as printed by `UniPoly::to_text`).
pub fn parse_univariate(text: &str, var: Var) -> Result<UniPoly> {
    let name = var.name().as_bytes()[0];
    if text.bytes().any(|b| b.is_ascii_alphabetic() && b != name) {
        let position = text.bytes().position(|b| b.is_ascii_alphabetic() && b != name).unwrap();
        return Err(Error::Parse(ParseError::UnknownVariable { position, name: text[position..position + 1].to_string() }));
    }
    let swapped: String = text.chars().map(|c| if c as u32 == name as u32 { 'x' } else { c }).collect();
    let p = parse_poly_exact(&swapped)?;
    let rows = p.as_poly_in_y();
    Ok(rows.into_iter().next().unwrap_or_else(|| UniPoly::zero(var)).with_var(var))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    #[test]
    fn reads_terms() {
        let f = parse_poly("x + y - 2").unwrap();
        assert_eq!(f, SparsePoly::from_int_terms(&[((1, 0), 1), ((0, 1), 1), ((0, 0), -2)]));
        let g = parse_poly("x^2*y^3 - 5").unwrap();
        assert_eq!(g, SparsePoly::from_int_terms(&[((2, 3), 1), ((0, 0), -5)]));
        assert_eq!(parse_poly("(1/2)*x - y").unwrap().to_text(), "x - 2*y");
    }

    #[test]
    fn accepts_variants() {
        assert_eq!(parse_poly("-x*x + 3").unwrap(), parse_poly("x^2 - 3").unwrap());
        assert_eq!(parse_poly_exact("(-3/4)*y").unwrap().coeff(0, 1), crate::arith::rat(-3, 4));
        assert_eq!(parse_poly_exact("  2 * x ^ 2 ").unwrap().coeff(2, 0), int(2));
        assert_eq!(parse_poly_exact("x*y*x").unwrap().coeff(2, 1), int(1));
    }

    #[test]
    fn errors_are_positioned() {
        match parse_poly("x + * y") {
            Err(Error::Parse(ParseError::Syntax { position, .. })) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
        match parse_poly("x + z") {
            Err(Error::Parse(ParseError::UnknownVariable { position, name })) => {
                assert_eq!(position, 4);
                assert_eq!(name, "z");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_poly("x^99999999999"), Err(Error::Parse(ParseError::ExponentOverflow { .. }))));
        assert!(matches!(parse_poly("2x"), Err(Error::Parse(ParseError::Syntax { .. }))));
        assert!(matches!(parse_poly(""), Err(Error::Parse(ParseError::Syntax { .. }))));
        assert!(matches!(parse_poly("1/0"), Err(Error::Parse(ParseError::Syntax { .. }))));
        assert!(matches!(parse_poly("(2"), Err(Error::Parse(ParseError::Syntax { .. }))));
    }

    #[test]
    fn univariate_round_trip() {
        let u = UniPoly::new(Var::T, vec![crate::arith::rat(-3, 2), int(0), int(2), crate::arith::rat(1, 7)]);
        assert_eq!(parse_univariate(&u.to_text(), Var::T).unwrap(), u);
        assert!(parse_univariate("t + x", Var::T).is_err());
    }
}
