

use super::rf::RatFunc;
use super::var::Var;
use super::Scalar;
use crate::{Error, Result};

/// Parse the textual serialization of a rational function: fully
/// parenthesized infix over `z1, z2, ..., zeta1, zeta2, eps, lambda` (and
/// auxiliary `t1, t2, ...`), with `^` for powers. `Display` output of
/// [`RatFunc`] parses back to an equal value.
pub fn parse_ratfunc(input: &str) -> Result<RatFunc> {
    let mut p = Parser {
        bytes: input.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            at: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
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

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.factor()?);
            } else if self.eat(b'/') {
                let d = self.factor()?;
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                acc = acc.div(&d)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<RatFunc> {
        let base = self.base()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let n = self.integer()? as i64;
            let e = if neg { -n } else { n };
            return base.pow(e);
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RatFunc::constant(Scalar::from_integer(n.into())))
            }
            Some(c) if c.is_ascii_alphabetic() => self.variable(),
            _ => Err(self.err("expected number, variable or '('")),
        }
    }

    fn integer(&mut self) -> Result<i128> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected integer"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer out of range"))
    }

    fn variable(&mut self) -> Result<RatFunc> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        let index = |p: &mut Self| -> Result<u32> {
            let n = p.integer()?;
            u32::try_from(n).map_err(|_| p.err("index out of range"))
        };
        let v = match name {
            "z" => Var::z(index(self)?),
            "zeta" => {
                let i = index(self)?;
                if i != 1 && i != 2 {
                    return Err(self.err("zeta index must be 1 or 2"));
                }
                Var::zeta(i as u8)
            }
            "eps" => Var::Eps,
            "lambda" => Var::Lambda,
            "t" => Var::aux(index(self)?),
            _ => return Err(self.err("unknown variable")),
        };
        Ok(RatFunc::var(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::{q, qr};

    #[test]
    fn parses_basic_expressions() {
        let f = parse_ratfunc("(z1 - z2)^2 / (z1 * z2) + 3/2 * zeta1").unwrap();
        let d = RatFunc::var(Var::z(1)).sub(&RatFunc::var(Var::z(2)));
        let expect = d
            .mul(&d)
            .div(&RatFunc::var(Var::z(1)).mul(&RatFunc::var(Var::z(2))))
            .unwrap()
            .add(&RatFunc::var(Var::zeta(1)).scale(&qr(3, 2)));
        assert_eq!(f, expect);
        let _ = q(0);
    }

    #[test]
    fn display_round_trips() {
        let cases = [
            "1/(z1 - z2)^2",
            "(z1 + z2)/(z1*z2)",
            "-3/7 + eps*lambda^2/(zeta1 - zeta2)",
            "z1^3 - 2*z1*z2 + t1",
            "0",
        ];
        for c in cases {
            let f = parse_ratfunc(c).unwrap();
            let g = parse_ratfunc(&f.to_string()).unwrap();
            assert_eq!(f, g, "round-trip failed for {c}");
        }
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_ratfunc("z1 +").is_err());
        assert!(parse_ratfunc("w3").is_err());
        assert!(parse_ratfunc("(z1").is_err());
        assert!(matches!(parse_ratfunc("1/0"), Err(Error::DivisionByZero)));
    }
}
