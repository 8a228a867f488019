use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

/// Coefficients are stored uniformly as rationals; the domain decides which
/// values are legal and how they are normalized.
pub type Coeff = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CoefficientDomain {
    PrimeField(u64),
    Rationals,
    Integers,
    /// `ℤ/m`. Gröbner computations run over `ℤ` with `m` adjoined to the ideal.
    IntegersMod(u64),
}

/// The arithmetic the Gröbner engine actually runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Arith {
    Rationals,
    Prime(u64),
    Integers,
}

impl CoefficientDomain {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CoefficientDomain::PrimeField(p) if !is_prime(p) => Err(Error::UnsupportedDomain(
                format!("GF({p}): modulus is not prime"),
            )),
            CoefficientDomain::IntegersMod(m) if m < 2 => Err(Error::UnsupportedDomain(format!(
                "ZZ/{m}: modulus must be at least 2"
            ))),
            _ => Ok(()),
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self, CoefficientDomain::PrimeField(_) | CoefficientDomain::Rationals)
    }

    pub(crate) fn arith(&self) -> Arith {
        match *self {
            CoefficientDomain::PrimeField(p) => Arith::Prime(p),
            CoefficientDomain::Rationals => Arith::Rationals,
            CoefficientDomain::Integers | CoefficientDomain::IntegersMod(_) => Arith::Integers,
        }
    }

    /// The extra constant that has to be adjoined to every ideal (`m` for `ℤ/m`).
    pub(crate) fn implicit_modulus(&self) -> Option<u64> {
        match *self {
            CoefficientDomain::IntegersMod(m) => Some(m),
            _ => None,
        }
    }

    /// Bring a value into canonical form for this domain. Fails when the value
    /// is not representable (a proper fraction over `ℤ`, or a denominator
    /// divisible by the characteristic).
    pub fn normalize(&self, c: &Coeff) -> Result<Coeff> {
        match *self {
            CoefficientDomain::Rationals => Ok(c.clone()),
            CoefficientDomain::Integers => {
                if c.is_integer() {
                    Ok(c.clone())
                } else {
                    Err(Error::Invalid(format!("{c} is not an integer")))
                }
            }
            CoefficientDomain::PrimeField(p) => mod_reduce(c, p),
            CoefficientDomain::IntegersMod(m) => {
                if !c.is_integer() {
                    return Err(Error::Invalid(format!("{c} is not an integer")));
                }
                mod_reduce(c, m)
            }
        }
    }

    /// Normalization for values produced by ring arithmetic, which are always
    /// representable.
    pub(crate) fn norm(&self, c: Coeff) -> Coeff {
        match *self {
            CoefficientDomain::Rationals | CoefficientDomain::Integers => c,
            CoefficientDomain::PrimeField(p) | CoefficientDomain::IntegersMod(p) => {
                mod_reduce(&c, p).expect("arithmetic result is representable")
            }
        }
    }
}

impl fmt::Display for CoefficientDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientDomain::PrimeField(p) => write!(f, "GF({p})"),
            CoefficientDomain::Rationals => write!(f, "QQ"),
            CoefficientDomain::Integers => write!(f, "ZZ"),
            CoefficientDomain::IntegersMod(m) => write!(f, "ZZ/{m}"),
        }
    }
}

impl std::str::FromStr for CoefficientDomain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_u64 = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad modulus in coefficient domain `{s}`")))
        };
        let dom = if s == "QQ" || s == "Q" {
            CoefficientDomain::Rationals
        } else if s == "ZZ" || s == "Z" {
            CoefficientDomain::Integers
        } else if let Some(rest) = s.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
            CoefficientDomain::PrimeField(parse_u64(rest)?)
        } else if let Some(rest) = s.strip_prefix("ZZ/").or_else(|| s.strip_prefix("Z/")) {
            CoefficientDomain::IntegersMod(parse_u64(rest)?)
        } else {
            return Err(Error::UnsupportedDomain(format!("unknown coefficient domain `{s}`")));
        };
        dom.validate()?;
        Ok(dom)
    }
}

fn mod_reduce(c: &Coeff, m: u64) -> Result<Coeff> {
    let m = BigInt::from(m);
    let num = c.numer().mod_floor(&m);
    let den = c.denom().mod_floor(&m);
    if den.is_one() {
        return Ok(Coeff::from_integer(num));
    }
    let inv = mod_inverse(&den, &m)
        .ok_or_else(|| Error::Invalid(format!("denominator of {c} is not invertible mod {m}")))?;
    Ok(Coeff::from_integer((num * inv).mod_floor(&m)))
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if g.gcd.is_one() {
        Some(g.x.mod_floor(m))
    } else if (-g.gcd.clone()).is_one() {
        Some((-g.x).mod_floor(m))
    } else {
        None
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Arith {
    pub(crate) fn is_field(self) -> bool {
        !matches!(self, Arith::Integers)
    }

    pub(crate) fn norm(self, c: Coeff) -> Coeff {
        match self {
            Arith::Prime(p) => mod_reduce(&c, p).expect("prime field element"),
            _ => c,
        }
    }

    pub(crate) fn inv(self, c: &Coeff) -> Coeff {
        match self {
            Arith::Rationals => c.recip(),
            Arith::Prime(p) => {
                let m = BigInt::from(p);
                Coeff::from_integer(mod_inverse(&c.to_integer(), &m).expect("nonzero in GF(p)"))
            }
            Arith::Integers => unreachable!("no inverses over ZZ"),
        }
    }

    pub(crate) fn mul(self, a: &Coeff, b: &Coeff) -> Coeff {
        self.norm(a * b)
    }
}

/// Integer helpers for the strong Gröbner basis over `ℤ`.
pub(crate) fn int(c: &Coeff) -> BigInt {
    debug_assert!(c.is_integer());
    c.to_integer()
}

/// Euclidean division with a non-negative remainder.
pub(crate) fn div_rem_euclid(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    let r = a.mod_floor(&b.abs());
    let q = (a - &r) / b;
    (q, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_domains() {
        assert_eq!("QQ".parse::<CoefficientDomain>().unwrap(), CoefficientDomain::Rationals);
        assert_eq!("GF(5)".parse::<CoefficientDomain>().unwrap(), CoefficientDomain::PrimeField(5));
        assert_eq!("ZZ/4".parse::<CoefficientDomain>().unwrap(), CoefficientDomain::IntegersMod(4));
        assert!("GF(6)".parse::<CoefficientDomain>().is_err());
        assert!("ZZ/1".parse::<CoefficientDomain>().is_err());
        assert!("RR".parse::<CoefficientDomain>().is_err());
    }

    #[test]
    fn prime_field_normalizes_fractions() {
        let d = CoefficientDomain::PrimeField(5);
        let half = Coeff::new(1.into(), 2.into());
        assert_eq!(d.normalize(&half).unwrap(), Coeff::from_integer(3.into()));
        assert!(CoefficientDomain::Integers.normalize(&half).is_err());
    }

    #[test]
    fn euclidean_remainder_is_nonnegative() {
        let (q, r) = div_rem_euclid(&BigInt::from(-7), &BigInt::from(3));
        assert_eq!(r, BigInt::from(2));
        assert_eq!(q, BigInt::from(-3));
        let (q, r) = div_rem_euclid(&BigInt::from(7), &BigInt::from(-3));
        assert_eq!(r, BigInt::from(1));
        assert_eq!(q, BigInt::from(-2));
    }
}
