//! Parsing of the polynomial text form.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! poly   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := ['-'] scalar | var ['^' int] | '(' poly ')'
//! scalar := int ['/' int] ['mod' int]
//! var    := ident ['[' int (',' int)* ']']
//! ```
//!
//! The canonical printer emits a subset of this grammar, so printing then
//! parsing is the identity.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::field::FieldTag;
use super::poly::{Monomial, Polynomial, Variable};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = chars[start..i].iter().collect();
            out.push(Tok::Int(BigInt::from_str(&lit).expect("digits")));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()[],".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::invalid(format!(
                "unexpected character '{c}' in polynomial"
            )));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    field: FieldTag,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "expected '{c}' at token {}",
                self.pos
            )))
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        let neg = self.eat_sym('-');
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(if neg { -n } else { n })
            }
            _ => Err(Error::invalid(format!(
                "expected integer at token {}",
                self.pos
            ))),
        }
    }

    fn small_int(&mut self) -> Result<i64> {
        let n = self.int()?;
        i64::try_from(&n).map_err(|_| Error::invalid(format!("index {n} out of range")))
    }

    fn poly(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(self.field);
        let mut sign = if self.eat_sym('-') { -1 } else { 1 };
        loop {
            let t = self.term()?;
            acc.add_scaled(&t, &self.field.from_i64(sign))?;
            if self.eat_sym('+') {
                sign = 1;
            } else if self.eat_sym('-') {
                sign = -1;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.eat_sym('*') {
            let f = self.factor()?;
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        if self.eat_sym('-') {
            return Ok(self.factor()?.neg());
        }
        if self.eat_sym('(') {
            let p = self.poly()?;
            self.expect_sym(')')?;
            return self.maybe_power(p);
        }
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let mut q = BigRational::from_integer(n);
                if self.eat_sym('/') {
                    let d = self.int()?;
                    if d == BigInt::from(0) {
                        return Err(Error::invalid("zero denominator"));
                    }
                    q /= BigRational::from_integer(d);
                }
                if self.peek() == Some(&Tok::Ident("mod".into())) {
                    self.pos += 1;
                    let p = self.int()?;
                    if self.field.characteristic() == 0
                        || BigInt::from(self.field.characteristic()) != p
                    {
                        return Err(Error::invalid(format!(
                            "coefficient modulus {p} does not match {}",
                            self.field
                        )));
                    }
                }
                let c = self.field.from_rational(&q)?;
                Ok(Polynomial::constant(self.field, c))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let mut idx = Vec::new();
                if self.eat_sym('[') {
                    loop {
                        idx.push(self.small_int()?);
                        if !self.eat_sym(',') {
                            break;
                        }
                    }
                    self.expect_sym(']')?;
                }
                let v = Variable::new(&name, &idx);
                self.maybe_power(Polynomial::var(self.field, v))
            }
            other => Err(Error::invalid(format!(
                "unexpected token {other:?} in polynomial"
            ))),
        }
    }

    fn maybe_power(&mut self, p: Polynomial) -> Result<Polynomial> {
        if self.eat_sym('^') {
            let e = self.small_int()?;
            let e = u32::try_from(e).map_err(|_| Error::invalid("negative exponent"))?;
            // Keep single-variable powers cheap.
            if let Some((m, c)) = p.leading() {
                if p.len() == 1 && m.factors().len() == 1 && self.field.is_one(c) {
                    let v = m.factors()[0].0.clone();
                    return Ok(Polynomial::monomial(self.field, Monomial::power(v, e)));
                }
            }
            p.pow(e)
        } else {
            Ok(p)
        }
    }
}

/// Parses a polynomial over `field`.
pub fn parse_polynomial(field: FieldTag, s: &str) -> Result<Polynomial> {
    let toks = tokenize(s)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        field,
    };
    let out = p.poly()?;
    if p.pos != toks.len() {
        return Err(Error::invalid(format!(
            "trailing input in polynomial '{s}'"
        )));
    }
    Ok(out)
}

/// Parses a single variable such as `x[1,2]` or `z`.
pub fn parse_variable(s: &str) -> Result<Variable> {
    let toks = tokenize(s)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        field: FieldTag::Rationals,
    };
    let poly = p.factor()?;
    if p.pos != toks.len() {
        return Err(Error::invalid(format!("not a variable: '{s}'")));
    }
    match poly.leading() {
        Some((m, c)) if poly.len() == 1 && m.degree() == 1 && FieldTag::Rationals.is_one(c) => {
            Ok(m.factors()[0].0.clone())
        }
        _ => Err(Error::invalid(format!("not a variable: '{s}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_rationals() {
        let q = FieldTag::Rationals;
        let p = parse_polynomial(q, "x[1]^2 - 3/2*x[1]*y[0,-1] + 7 - yEdge[2]").unwrap();
        let text = p.to_string();
        assert_eq!(parse_polynomial(q, &text).unwrap(), p);
        assert_eq!(parse_polynomial(q, &text).unwrap().to_string(), text);
    }

    #[test]
    fn round_trip_prime_field() {
        let f = FieldTag::F2;
        let p = parse_polynomial(f, "x[0,1] + x[1,0] + 1").unwrap();
        assert_eq!(
            p.to_string(),
            "1 mod 2 * x[0,1] + 1 mod 2 * x[1,0] + 1 mod 2"
        );
        assert_eq!(parse_polynomial(f, &p.to_string()).unwrap(), p);
        assert!(parse_polynomial(f, "1 mod 3 * x").is_err());
    }

    #[test]
    fn parenthesised_powers() {
        let q = FieldTag::Rationals;
        let p = parse_polynomial(q, "(x + 1)^2").unwrap();
        assert_eq!(p, parse_polynomial(q, "x^2 + 2*x + 1").unwrap());
    }

    #[test]
    fn variables() {
        assert_eq!(
            parse_variable("x[1,2]").unwrap(),
            Variable::new("x", &[1, 2])
        );
        assert_eq!(parse_variable("xs").unwrap(), Variable::plain("xs"));
        assert!(parse_variable("x + y").is_err());
    }
}
