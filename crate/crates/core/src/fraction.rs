//! Arbitrary-precision rational numbers.
//!
//! [`ExactFraction`] is the carrier for every finite-support probability. It
//! is always stored in lowest terms with a positive denominator, so equality
//! is structural and `Display` is canonical (`"0"`, `"3"`, `"125/1656"`).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseFractionError {
    #[error("empty fraction literal")]
    Empty,
    #[error("invalid fraction literal {0:?}")]
    Invalid(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// An exact rational number in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactFraction(BigRational);

impl ExactFraction {
    /// Builds `numer/denom`. Panics if `denom == 0`.
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        ExactFraction(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_integer(n: i64) -> Self {
        ExactFraction(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Option<Self> {
        if denom.is_zero() {
            None
        } else {
            Some(ExactFraction(BigRational::new(numer, denom)))
        }
    }

    pub fn zero() -> Self {
        ExactFraction(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactFraction(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        ExactFraction(self.0.abs())
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        ExactFraction(self.0.recip())
    }

    pub fn pow(&self, exp: u32) -> Self {
        ExactFraction(num_traits::pow(self.0.clone(), exp as usize))
    }

    /// Integer power; negative exponents invert first. Panics on `0^-n`.
    pub fn powi(&self, exp: i32) -> Self {
        if exp >= 0 {
            self.pow(exp as u32)
        } else {
            self.recip().pow(exp.unsigned_abs())
        }
    }

    /// Nearest `f64`; lossy.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for ExactFraction {
    fn from(r: BigRational) -> Self {
        ExactFraction(r)
    }
}

impl From<i64> for ExactFraction {
    fn from(n: i64) -> Self {
        ExactFraction::from_integer(n)
    }
}

impl Default for ExactFraction {
    fn default() -> Self {
        ExactFraction::zero()
    }
}

impl fmt::Display for ExactFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `"p/q"`, integers, and terminating decimals such as `"0.35"`.
impl FromStr for ExactFraction {
    type Err = ParseFractionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseFractionError::Empty);
        }
        let invalid = || ParseFractionError::Invalid(s.to_string());
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| invalid())?;
            let d: BigInt = d.trim().parse().map_err(|_| invalid())?;
            if d.is_zero() {
                return Err(ParseFractionError::ZeroDenominator(s.to_string()));
            }
            return Ok(ExactFraction(BigRational::new(n, d)));
        }
        if let Some((int, frac)) = s.split_once('.') {
            let negative = int.starts_with('-');
            let int_digits = int.trim_start_matches(['-', '+']);
            if frac.is_empty() && int_digits.is_empty() {
                return Err(invalid());
            }
            if !int_digits.chars().all(|c| c.is_ascii_digit())
                || !frac.chars().all(|c| c.is_ascii_digit())
            {
                return Err(invalid());
            }
            let digits = format!("{int_digits}{frac}");
            let mut numer: BigInt = if digits.is_empty() {
                BigInt::zero()
            } else {
                digits.parse().map_err(|_| invalid())?
            };
            if negative {
                numer = -numer;
            }
            let denom = num_traits::pow(BigInt::from(10), frac.len());
            return Ok(ExactFraction(BigRational::new(numer, denom)));
        }
        let n: BigInt = s.parse().map_err(|_| invalid())?;
        Ok(ExactFraction(BigRational::from_integer(n)))
    }
}

impl Serialize for ExactFraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactFraction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&ExactFraction> for &ExactFraction {
            type Output = ExactFraction;
            fn $method(self, rhs: &ExactFraction) -> ExactFraction {
                ExactFraction((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<ExactFraction> for ExactFraction {
            type Output = ExactFraction;
            fn $method(self, rhs: ExactFraction) -> ExactFraction {
                ExactFraction(self.0.$method(rhs.0))
            }
        }
        impl $trait<&ExactFraction> for ExactFraction {
            type Output = ExactFraction;
            fn $method(self, rhs: &ExactFraction) -> ExactFraction {
                ExactFraction(self.0.$method(&rhs.0))
            }
        }
        impl $trait<ExactFraction> for &ExactFraction {
            type Output = ExactFraction;
            fn $method(self, rhs: ExactFraction) -> ExactFraction {
                ExactFraction((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ExactFraction {
    type Output = ExactFraction;
    fn neg(self) -> ExactFraction {
        ExactFraction(-self.0)
    }
}

impl Neg for &ExactFraction {
    type Output = ExactFraction;
    fn neg(self) -> ExactFraction {
        ExactFraction(-self.0.clone())
    }
}

impl std::iter::Sum for ExactFraction {
    fn sum<I: Iterator<Item = ExactFraction>>(iter: I) -> Self {
        iter.fold(ExactFraction::zero(), |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a ExactFraction> for ExactFraction {
    fn sum<I: Iterator<Item = &'a ExactFraction>>(iter: I) -> Self {
        iter.fold(ExactFraction::zero(), |acc, x| acc + x)
    }
}

/// Shorthand for fixtures: `frac("125/1656")`. Panics on malformed input.
pub fn frac(s: &str) -> ExactFraction {
    s.parse()
        .unwrap_or_else(|e| panic!("bad fraction literal {s:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let x = ExactFraction::new(10, -4);
        assert_eq!(x.to_string(), "-5/2");
        assert!(x.denom().is_positive());
        assert_eq!(ExactFraction::new(0, 7).to_string(), "0");
        assert_eq!(ExactFraction::new(6, 3).to_string(), "2");
    }

    #[test]
    fn parse_forms() {
        assert_eq!(frac("125/1656"), ExactFraction::new(125, 1656));
        assert_eq!(frac("0.35"), ExactFraction::new(7, 20));
        assert_eq!(frac("-0.5"), ExactFraction::new(-1, 2));
        assert_eq!(frac(".25"), ExactFraction::new(1, 4));
        assert_eq!(frac("3"), ExactFraction::from_integer(3));
        assert_eq!(frac(" 4 / 8 "), ExactFraction::new(1, 2));
        assert!(matches!(
            "1/0".parse::<ExactFraction>(),
            Err(ParseFractionError::ZeroDenominator(_))
        ));
        assert!("abc".parse::<ExactFraction>().is_err());
        assert!("1.2.3".parse::<ExactFraction>().is_err());
        assert!("".parse::<ExactFraction>().is_err());
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = frac("1/3");
        let b = frac("1/6");
        assert_eq!(&a + &b, frac("1/2"));
        assert_eq!(&a - &b, frac("1/6"));
        assert_eq!(&a * &b, frac("1/18"));
        assert_eq!(&a / &b, frac("2"));
        assert_eq!(frac("2/3").pow(3), frac("8/27"));
        assert_eq!(frac("2/3").powi(-2), frac("9/4"));
        assert!(frac("1/3") < frac("34/100"));
    }

    #[test]
    fn serde_round_trip() {
        let x = frac("-7/20");
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "\"-7/20\"");
        let y: ExactFraction = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
    }
}
