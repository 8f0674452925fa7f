use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The base field of a polynomial system: the rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldTag {
    Rationals,
    Prime(u64),
}

/// An exact field element. The variant always matches the owning [`FieldTag`]:
/// `Rat` for the rationals, `Mod` (a reduced residue) for prime fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rat(BigRational),
    Mod(u64),
}

impl FieldTag {
    pub const F2: FieldTag = FieldTag::Prime(2);

    pub fn prime(p: u64) -> Result<Self> {
        if is_prime_u64(p) {
            Ok(FieldTag::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldTag::Rationals => 0,
            FieldTag::Prime(p) => *p,
        }
    }

    pub fn check(&self, other: &FieldTag) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch(*self, *other))
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldTag::Rationals => Scalar::Rat(BigRational::zero()),
            FieldTag::Prime(_) => Scalar::Mod(0),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldTag::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
            FieldTag::Prime(p) => Scalar::Mod(v.rem_euclid(*p as i64) as u64),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            FieldTag::Rationals => Scalar::Rat(BigRational::from_integer(v.clone())),
            FieldTag::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(*p));
                Scalar::Mod(r.to_u64().expect("residue fits"))
            }
        }
    }

    /// `num / den`; fails if `den` vanishes in this field.
    pub fn ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        let d = self.from_i64(den);
        let inv = self
            .inv(&d)
            .ok_or_else(|| Error::invalid(format!("{den} is not invertible in {self}")))?;
        Ok(self.mul(&self.from_i64(num), &inv))
    }

    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match self {
            FieldTag::Rationals => Ok(Scalar::Rat(q.clone())),
            FieldTag::Prime(_) => {
                let n = self.from_bigint(q.numer());
                let d = self.from_bigint(q.denom());
                let inv = self.inv(&d).ok_or_else(|| {
                    Error::invalid(format!("denominator of {q} vanishes in {self}"))
                })?;
                Ok(self.mul(&n, &inv))
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(q) => q.is_zero(),
            Scalar::Mod(v) => *v == 0,
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(q) => q.is_one(),
            Scalar::Mod(v) => *v == 1,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldTag::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (FieldTag::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u128 + *y as u128) % *p as u128) as u64)
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldTag::Rationals, Scalar::Rat(x)) => Scalar::Rat(-x),
            (FieldTag::Prime(p), Scalar::Mod(x)) => Scalar::Mod(if *x == 0 { 0 } else { p - x }),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldTag::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (FieldTag::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(mul_mod(*x, *y, *p))
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return None;
        }
        match (self, a) {
            (FieldTag::Rationals, Scalar::Rat(x)) => Some(Scalar::Rat(x.recip())),
            (FieldTag::Prime(p), Scalar::Mod(x)) => Some(Scalar::Mod(pow_mod(*x, p - 2, *p))),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        self.inv(b).map(|i| self.mul(a, &i))
    }

    pub fn pow(&self, a: &Scalar, e: u32) -> Scalar {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn contains(&self, a: &Scalar) -> bool {
        match (self, a) {
            (FieldTag::Rationals, Scalar::Rat(_)) => true,
            (FieldTag::Prime(p), Scalar::Mod(v)) => v < p,
            _ => false,
        }
    }

    /// Canonical text for a scalar: `num/den` over the rationals, `k mod p` otherwise.
    pub fn format(&self, a: &Scalar) -> String {
        match (self, a) {
            (FieldTag::Rationals, Scalar::Rat(q)) => format!("{}/{}", q.numer(), q.denom()),
            (FieldTag::Prime(p), Scalar::Mod(v)) => format!("{v} mod {p}"),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    /// Accepts `n`, `n/d`, and `k mod p` (the modulus must match).
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        if let Some((k, p)) = s.split_once(" mod ") {
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad modulus in '{s}'")))?;
            if *self != FieldTag::Prime(p) {
                return Err(Error::invalid(format!("'{s}' does not belong to {self}")));
            }
            let k = BigInt::from_str(k.trim())
                .map_err(|_| Error::invalid(format!("bad residue '{s}'")))?;
            return Ok(self.from_bigint(&k));
        }
        let q = match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim())
                    .map_err(|_| Error::invalid(format!("bad numerator '{s}'")))?;
                let d = BigInt::from_str(d.trim())
                    .map_err(|_| Error::invalid(format!("bad denominator '{s}'")))?;
                if d.is_zero() {
                    return Err(Error::invalid(format!("zero denominator in '{s}'")));
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(
                BigInt::from_str(s).map_err(|_| Error::invalid(format!("bad scalar '{s}'")))?,
            ),
        };
        self.from_rational(&q)
    }

    /// Whether `n` is a unit in this field (i.e. the characteristic does not divide it).
    pub fn is_unit_integer(&self, n: u64) -> bool {
        match self {
            FieldTag::Rationals => n != 0,
            FieldTag::Prime(p) => !n.is_multiple_of(*p),
        }
    }
}

impl Scalar {
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_negative(),
            Scalar::Mod(_) => false,
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rationals => write!(f, "Q"),
            FieldTag::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl FromStr for FieldTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "Q" | "QQ" | "rationals" => Ok(FieldTag::Rationals),
            _ => {
                let inner = s
                    .strip_prefix("GF(")
                    .and_then(|r| r.strip_suffix(')'))
                    .or_else(|| s.strip_prefix('F'))
                    .ok_or_else(|| Error::invalid(format!("unknown field '{s}'")))?;
                let p: u64 = inner
                    .parse()
                    .map_err(|_| Error::invalid(format!("unknown field '{s}'")))?;
                FieldTag::prime(p)
            }
        }
    }
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = FieldTag::prime(7).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(5);
        assert_eq!(f.add(&a, &b), Scalar::Mod(1));
        assert_eq!(f.mul(&a, &b), Scalar::Mod(1));
        assert_eq!(f.inv(&a), Some(Scalar::Mod(5)));
        assert_eq!(f.from_i64(-1), Scalar::Mod(6));
        assert_eq!(f.inv(&f.zero()), None);
    }

    #[test]
    fn rational_parse_and_format() {
        let q = FieldTag::Rationals;
        let a = q.parse("-6/4").unwrap();
        assert_eq!(q.format(&a), "-3/2");
        assert_eq!(q.format(&q.parse("5").unwrap()), "5/1");
        assert!(q.parse("1/0").is_err());
    }

    #[test]
    fn modular_parse() {
        let f = FieldTag::F2;
        assert_eq!(f.parse("1 mod 2").unwrap(), Scalar::Mod(1));
        assert_eq!(f.parse("3").unwrap(), Scalar::Mod(1));
        assert_eq!(f.parse("1/3").unwrap(), Scalar::Mod(1));
        assert!(f.parse("1 mod 3").is_err());
        assert!(f.parse("1/2").is_err());
    }

    #[test]
    fn field_tags() {
        assert!(FieldTag::prime(9).is_err());
        assert_eq!("GF(5)".parse::<FieldTag>().unwrap(), FieldTag::Prime(5));
        assert_eq!("F2".parse::<FieldTag>().unwrap(), FieldTag::F2);
        assert_eq!("Q".parse::<FieldTag>().unwrap(), FieldTag::Rationals);
        assert_eq!(FieldTag::Rationals.characteristic(), 0);
    }

    #[test]
    fn miller_rabin_agrees_with_trial_division() {
        let trial = |n: u64| {
            n >= 2
                && (2..)
                    .take_while(|d| d * d <= n)
                    .all(|d| !n.is_multiple_of(d))
        };
        for n in 0..5000u64 {
            assert_eq!(is_prime_u64(n), trial(n), "n = {n}");
        }
        assert!(is_prime_u64((1u64 << 61) - 1));
    }
}
