//! Textual form of polynomials.
//!
//! Output is canonical: descending powers, coefficients in `[0, p)`, zero
//! terms omitted, unit coefficients elided on non-constant terms, e.g.
//! `x^4+3x^2+1`. Input follows
//!
//! ```text
//! poly := ["-"] term (("+" | "-") term)*
//! term := coeff | [coeff] "x" ["^" exponent]
//! ```
//!
//! with whitespace ignored and negative coefficients reduced mod p.

use std::fmt;

use super::FpPoly;
use crate::error::{Error, Result};
use crate::fp::PrimeModulus;

/// Guard against inputs like `x^99999999999` allocating absurd vectors.
const MAX_PARSE_DEGREE: usize = 1 << 24;

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match (k, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("x")?,
                (1, c) => write!(f, "{c}x")?,
                (k, 1) => write!(f, "x^{k}")?,
                (k, c) => write!(f, "{c}x^{k}")?,
            }
        }
        Ok(())
    }
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, reason: &str) -> Error {
        let end = (self.pos + 1).min(self.src.len());
        let token = if self.pos < self.src.len() {
            String::from_utf8_lossy(&self.src[self.pos..end]).into_owned()
        } else {
            "<end of input>".to_string()
        };
        Error::Parse {
            position: self.pos,
            token,
            reason: reason.to_string(),
        }
    }

    /// Digits as a residue mod p, and as a bounded exponent if small enough.
    fn number(&mut self, md: PrimeModulus) -> Option<(u64, Option<usize>)> {
        self.skip_ws();
        let start = self.pos;
        let mut residue = 0u64;
        let mut exact: Option<usize> = Some(0);
        while let Some(&b) = self.src.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            let d = (b - b'0') as u64;
            residue = md.add(md.mul(residue, 10 % md.value()), d % md.value());
            exact = exact
                .and_then(|e| e.checked_mul(10))
                .and_then(|e| e.checked_add(d as usize));
            self.pos += 1;
        }
        (self.pos > start).then_some((residue, exact))
    }
}

impl FpPoly {
    /// Parses a polynomial over F_p; see the module docs for the grammar.
    pub fn parse(src: &str, md: PrimeModulus) -> Result<FpPoly> {
        let mut cur = Cursor {
            src: src.as_bytes(),
            pos: 0,
        };
        let mut coeffs: Vec<u64> = Vec::new();
        let mut negative = false;
        if cur.peek() == Some(b'-') {
            negative = true;
            cur.pos += 1;
        }
        loop {
            if cur.peek().is_none() {
                return Err(cur.error("expected a term"));
            }
            let coeff = cur.number(md).map(|(r, _)| r);
            let (value, degree) = if cur.peek() == Some(b'x') {
                cur.pos += 1;
                let mut k = 1usize;
                if cur.peek() == Some(b'^') {
                    cur.pos += 1;
                    let Some((_, exact)) = cur.number(md) else {
                        return Err(cur.error("expected an exponent after '^'"));
                    };
                    k = match exact {
                        Some(k) if k <= MAX_PARSE_DEGREE => k,
                        _ => return Err(cur.error("exponent too large")),
                    };
                }
                (coeff.unwrap_or(1), k)
            } else {
                match coeff {
                    Some(c) => (c, 0),
                    None => return Err(cur.error("expected a coefficient or 'x'")),
                }
            };
            if coeffs.len() <= degree {
                coeffs.resize(degree + 1, 0);
            }
            let signed = if negative { md.neg(value) } else { value };
            coeffs[degree] = md.add(coeffs[degree], signed);
            match cur.peek() {
                None => break,
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                Some(_) => return Err(cur.error("expected '+', '-' or end of input")),
            }
            cur.pos += 1;
        }
        Ok(FpPoly::from_raw(md, coeffs))
    }
}
