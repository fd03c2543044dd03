//! Recursive-descent parser for polynomial expressions in `t` and `i`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 't' | 'i' | '(' expr ')'
//! ```
//!
//! The expression is evaluated directly in F_p[t] while parsing.

use std::fmt;

use thiserror::Error;

use super::Polynomial;
use crate::field::PrimeModulus;

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    /// `i` was used but `p = 3 (mod 4)`.
    IUnavailable,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the input.
    pub position: usize,
}

impl ParseError {
    fn syntax(position: usize, msg: impl Into<String>) -> Self {
        ParseError {
            kind: ParseErrorKind::Syntax(msg.into()),
            position,
        }
    }

    /// Shifts the reported position, for expressions embedded in a larger string.
    pub fn offset(mut self, by: usize) -> Self {
        self.position += by;
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error at {}: {msg}", self.position),
            ParseErrorKind::IUnavailable => write!(
                f,
                "`i` at {} is not available: -1 has no square root in this field",
                self.position
            ),
        }
    }
}

pub fn parse_poly(text: &str, modulus: PrimeModulus) -> Result<Polynomial, ParseError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        modulus,
    };
    let poly = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(ParseError::syntax(
            parser.pos,
            format!("unexpected `{}`", parser.src[parser.pos] as char),
        ));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    modulus: PrimeModulus,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        while self.eat(b'*') {
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        if self.eat(b'-') {
            Ok(-self.unary()?)
        } else if self.eat(b'+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        self.skip_ws();
        let at = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return Err(ParseError::syntax(
                at,
                "expected a non-negative integer exponent",
            ));
        }
        let exp = std::str::from_utf8(digits)
            .ok()
            .and_then(|s| s.parse::<u64>().ok())
            .filter(|&e| e <= MAX_EXPONENT)
            .ok_or_else(|| ParseError::syntax(at, format!("exponent exceeds {MAX_EXPONENT}")))?;
        let mut acc = Polynomial::one(self.modulus);
        let mut sq = base;
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.square();
            }
        }
        Ok(acc)
    }

    fn digits(&mut self) -> &[u8] {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let at = match self.peek() {
            None => return Err(ParseError::syntax(self.pos, "unexpected end of input")),
            Some(_) => self.pos,
        };
        let m = self.modulus;
        match self.src[at] {
            b'0'..=b'9' => {
                let p = m.get() as u128;
                let value = self
                    .digits()
                    .iter()
                    .fold(0u128, |acc, d| (acc * 10 + (d - b'0') as u128) % p);
                Ok(Polynomial::constant(m, value as u64))
            }
            b't' => {
                self.pos += 1;
                Ok(Polynomial::t(m))
            }
            b'i' => {
                self.pos += 1;
                let i = m.sqrt_minus_one().ok_or(ParseError {
                    kind: ParseErrorKind::IUnavailable,
                    position: at,
                })?;
                Ok(Polynomial::constant(m, i.value()))
            }
            b'(' => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(ParseError::syntax(self.pos, "expected `)`"));
                }
                Ok(inner)
            }
            c => Err(ParseError::syntax(
                at,
                format!("unexpected `{}`", c as char),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn parses_i_notation() {
        let f = parse_poly("t^2+2*i*t-2", fp(13)).unwrap();
        assert_eq!(f.coeffs(), &[11, 10, 1]);
        let g = parse_poly("(t+1)*(t-1)", fp(5)).unwrap();
        assert_eq!(g.coeffs(), &[4, 0, 1]);
    }

    #[test]
    fn precedence_and_unary() {
        let m = fp(101);
        assert_eq!(parse_poly("-t^2", m).unwrap().coeffs(), &[0, 0, 100]);
        assert_eq!(
            parse_poly("2*t^2 - 3*t + 1", m).unwrap().coeffs(),
            &[1, 98, 2]
        );
        assert_eq!(parse_poly("(t+1)^3", m).unwrap().coeffs(), &[1, 3, 3, 1]);
        assert_eq!(parse_poly("t^0", m).unwrap().coeffs(), &[1]);
        assert_eq!(parse_poly("  -(-5)  ", m).unwrap().coeffs(), &[5]);
        assert!(parse_poly("0", m).unwrap().is_zero());
        // literals wider than u64 still reduce
        assert_eq!(
            parse_poly("100000000000000000000000000000", m)
                .unwrap()
                .coeffs(),
            &[(10u128.pow(29) % 101) as u64]
        );
    }

    #[test]
    fn i_needs_p_one_mod_four() {
        let err = parse_poly("t + i", fp(7)).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::IUnavailable);
        assert_eq!(err.position, 4);
        assert_eq!(parse_poly("i*i", fp(13)).unwrap().coeffs(), &[12]);
    }

    #[test]
    fn syntax_errors_report_positions() {
        let m = fp(13);
        let cases = [
            ("t +", 3),
            ("t ^ x", 4),
            ("(t + 1", 6),
            ("t x", 2),
            ("", 0),
            ("2 t", 2),
            ("t^99999", 2),
        ];
        for (text, pos) in cases {
            let err = parse_poly(text, m).unwrap_err();
            assert!(matches!(err.kind, ParseErrorKind::Syntax(_)), "{text}");
            assert_eq!(err.position, pos, "{text}: {err}");
        }
    }
}
