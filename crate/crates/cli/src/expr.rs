//! Expression front end for the punctured-line ring.
//!
//! Grammar (whitespace insensitive):
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ['^' int]
//! atom   := int | VAR | '(' expr ')'
//! ```
//!
//! `VAR` is the single variable letter the caller accepts ('x' for the
//! punctured line, 'q' for the boundary map's Laurent input). Negative
//! exponents are allowed wherever the result stays in the ring; anything
//! else (a pole away from 0 and 1, a fractional constant) surfaces as the
//! underlying ring error rather than a parse error.

use std::fmt;

use tateq::punctured::{IntPoly, PrfError};
use tateq::PuncturedRationalFunction as Prf;

#[derive(Debug, Clone, PartialEq)]
pub enum ExprError {
    /// Malformed input; `offset` is the byte position of the first
    /// character that made no sense.
    Syntax { offset: usize, message: String },
    /// Parsed fine but the value leaves the ring (division by zero, a pole
    /// outside the punctures, a non-invertible constant).
    Algebra(PrfError),
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprError::Syntax { offset, message } => {
                write!(f, "syntax error at byte {offset}: {message}")
            }
            ExprError::Algebra(e) => write!(f, "{e}"),
        }
    }
}

impl From<PrfError> for ExprError {
    fn from(e: PrfError) -> Self {
        ExprError::Algebra(e)
    }
}

/// Parse `src` into a punctured-line element, treating `var` as the
/// variable letter.
pub fn parse_expr(src: &str, var: char) -> Result<Prf, ExprError> {
    let mut p = Parser {
        bytes: src.as_bytes(),
        pos: 0,
        var: var as u8,
    };
    p.skip_ws();
    if p.pos == p.bytes.len() {
        return Err(p.err("empty expression"));
    }
    let value = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(value)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    var: u8,
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> ExprError {
        ExprError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Prf, ExprError> {
        self.skip_ws();
        let negate = self.eat(b'-');
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = &acc + &rhs;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = &acc - &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Prf, ExprError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = &acc * &rhs;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = acc.div(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Prf, ExprError> {
        let base = self.atom()?;
        self.skip_ws();
        if self.eat(b'^') {
            self.skip_ws();
            let e = self.int()?;
            return Ok(base.pow(e)?);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Prf, ExprError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c == self.var => {
                self.pos += 1;
                Ok(Prf::x())
            }
            Some(c) if c.is_ascii_digit() || c == b'-' => {
                let n = self.int()?;
                Ok(Prf::from_poly(IntPoly::from_i64(&[n])))
            }
            Some(c) => Err(self.err(&format!(
                "expected a number, '{}', or '(', found {:?}",
                self.var as char, c as char
            ))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn int(&mut self) -> Result<i64, ExprError> {
        let start = self.pos;
        let neg = self.eat(b'-');
        let digits_start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.err("expected an integer"));
        }
        let text = std::str::from_utf8(&self.bytes[digits_start..self.pos]).unwrap();
        let mag: i64 = text.parse().map_err(|_| ExprError::Syntax {
            offset: start,
            message: "integer literal out of range".to_string(),
        })?;
        Ok(if neg { -mag } else { mag })
    }
}
