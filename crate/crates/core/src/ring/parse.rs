use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::elem::RingElem;
use super::spec::RingSpec;
use crate::{Error, Result};

/// Parse a ring element from text such as `3/2*nu^2*L^-1 - (1-nu)^-2`.
///
/// Grammar: sums and differences of products and quotients of powers;
/// atoms are integers, generator names and parenthesized expressions.
/// Division and negative powers go through [`RingElem::invert`].
pub fn parse_elem(spec: &Arc<RingSpec>, text: &str) -> Result<RingElem> {
    let mut p = Parser {
        spec,
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    spec: &'a Arc<RingSpec>,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!(
            "{what} at byte {} of {:?}",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
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

    fn expr(&mut self) -> Result<RingElem> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RingElem> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                b'/' => {
                    self.pos += 1;
                    let d = self.unary()?;
                    acc = &acc * &d.invert()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RingElem> {
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

    fn power(&mut self) -> Result<RingElem> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.exponent()?;
            return base.pow_i(e);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.peek() == Some(b'(');
        if paren {
            self.pos += 1;
        }
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            _ => false,
        };
        self.skip_ws();
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.err("expected exponent"));
        }
        let mut v: i64 = digits.parse().map_err(|_| self.err("exponent too large"))?;
        if neg {
            v = -v;
        }
        if paren {
            if self.peek() != Some(b')') {
                return Err(self.err("expected ')'"));
            }
            self.pos += 1;
        }
        Ok(v)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<RingElem> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                let n: BigInt = d.parse().map_err(|_| self.err("bad integer"))?;
                Ok(RingElem::constant(self.spec, BigRational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                RingElem::gen(self.spec, &name)
            }
            _ => Err(self.err("expected a number, generator or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::ratio;

    #[test]
    fn parses_products_and_powers() {
        let s = RingSpec::builder().nilpotent("nu", 3).unit("L").lambda(2, 2).build().unwrap();
        let a = parse_elem(&s, "3/2*nu^2*L^-1").unwrap();
        let nu = RingElem::gen(&s, "nu").unwrap();
        let linv = RingElem::gen_pow(&s, "L", -1).unwrap();
        assert_eq!(a, (&(&nu * &nu) * &linv).scale(&ratio(3, 2)));
        let b = parse_elem(&s, "(1-nu)^(-1)").unwrap();
        assert_eq!(b, parse_elem(&s, "1 + nu + nu^2").unwrap());
        assert_eq!(parse_elem(&s, "N1*N1 - -N2").unwrap().num_terms(), 2);
        assert_eq!(parse_elem(&s, &a.to_string()).unwrap(), a);
    }

    #[test]
    fn rejects_garbage() {
        let s = RingSpec::builder().nilpotent("nu", 3).build().unwrap();
        assert!(parse_elem(&s, "nu +").is_err());
        assert!(parse_elem(&s, "x").is_err());
        assert!(parse_elem(&s, "(nu").is_err());
        assert!(parse_elem(&s, "1/nu").is_err());
    }
}
