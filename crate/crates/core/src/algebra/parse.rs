//! Recursive-descent parser for the polynomial input language.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ('^' integer)?
//! atom   := integer | 'i' | 'x' | 'y' | '(' expr ')' | ('+'|'-') factor
//! ```
//!
//! Division is only allowed by nonzero constants.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{AlgebraError, BiPoly, GaussRat};

/// Parse polynomial text into an exact [`BiPoly`].
pub fn parse_poly(text: &str) -> Result<BiPoly, AlgebraError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

/// Canonical text form; `parse_poly(&print_poly(f)) == f`.
pub fn print_poly(f: &BiPoly) -> String {
    f.to_string()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> AlgebraError {
        AlgebraError::Syntax { pos: self.pos, msg: msg.to_string() }
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

    fn expr(&mut self) -> Result<BiPoly, AlgebraError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<BiPoly, AlgebraError> {
        let mut acc = self.factor()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            let op_pos = self.pos;
            self.pos += 1;
            let rhs = self.factor()?;
            if c == b'*' {
                acc = &acc * &rhs;
            } else {
                let d = match rhs.constant_value() {
                    Some(d) => d,
                    None => return Err(AlgebraError::Syntax { pos: op_pos, msg: "division by a non-constant".into() }),
                };
                let inv = d.inv().ok_or(AlgebraError::DivisionByZero { pos: op_pos })?;
                acc = acc.scale(&inv);
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<BiPoly, AlgebraError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, AlgebraError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn atom(&mut self) -> Result<BiPoly, AlgebraError> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.factor()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.factor()
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(BiPoly::constant(GaussRat::from_rational(BigRational::from_integer(n))))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match name {
                    "x" => Ok(BiPoly::x()),
                    "y" => Ok(BiPoly::y()),
                    "i" => Ok(BiPoly::constant(GaussRat::i())),
                    _ => Err(AlgebraError::UnknownVariable { name: name.to_string(), pos: start }),
                }
            }
            Some(_) => Err(self.err("unexpected character")),
        }
    }
}
