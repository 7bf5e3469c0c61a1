//! Exact rational arithmetic over arbitrary-precision integers.
//!
//! Thin wrapper around `num_rational::BigRational` adding exact text parsing
//! and the comparison helpers the statistics need. Decimal text is converted
//! exactly ("0.1" becomes 1/10, never a binary float). Values are kept in
//! lowest terms with a positive denominator by the backing type.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExactRational(BigRational);

impl ExactRational {
    /// Builds `num/den`, reduced. Fails on a zero denominator.
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(ExactRational(BigRational::new(num, den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn from_biguint(n: BigUint) -> Self {
        Self::from_integer(BigInt::from(n))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    /// `base^exp` as an exact rational; `exp` may be negative.
    pub fn power_of(base: u64, exp: i32) -> Self {
        let b = BigInt::from(base);
        if exp >= 0 {
            Self::from_integer(b.pow(exp as u32))
        } else {
            ExactRational(BigRational::new(BigInt::one(), b.pow(exp.unsigned_abs())))
        }
    }

    /// Parses plain decimal text such as "2", "0.25", "-1.5" into the exact
    /// value. No exponent notation, no fraction bar.
    pub fn from_decimal_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let err = |reason: &str| Error::ParseRational {
            input: text.to_string(),
            reason: reason.to_string(),
        };
        let (negative, rest) = match t.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (int_part, frac_part) = match rest.split_once('.') {
            Some((i, f)) => (i, f),
            None => (rest, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err("no digits"));
        }
        if !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(err("expected only decimal digits and at most one point"));
        }
        let ten = BigInt::from(10u32);
        let mut num: BigInt = if int_part.is_empty() {
            BigInt::zero()
        } else {
            int_part.parse().expect("digits checked")
        };
        let mut den = BigInt::one();
        for b in frac_part.bytes() {
            num = &num * &ten + BigInt::from(b - b'0');
            den *= &ten;
        }
        if negative {
            num = -num;
        }
        Self::new(num, den)
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        ExactRational(self.0.abs())
    }

    /// Nonnegative integer power.
    pub fn pow_u(&self, exp: u32) -> Self {
        ExactRational(Pow::pow(&self.0, exp as i32))
    }

    pub fn floor_to_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Distance to the closest integer, always in [0, 1/2].
    pub fn distance_to_nearest_integer(&self) -> Self {
        ExactRational((&self.0 - self.0.round()).abs())
    }

    /// Numerator and denominator when both fit in u32 and the value is
    /// positive. Used for exponent pairs.
    pub fn small_ratio_parts(&self) -> Option<(u32, u32)> {
        if self.is_negative() || self.is_zero() {
            return None;
        }
        Some((self.numerator().to_u32()?, self.denominator().to_u32()?))
    }

    /// Closest double; only this conversion is inexact.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    /// Accepts decimal text ("0.1") or a fraction of integers ("7/9").
    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some((num, den)) = t.split_once('/') {
            let parse_int = |part: &str| -> Result<BigInt> {
                part.trim().parse().map_err(|_| Error::ParseRational {
                    input: text.to_string(),
                    reason: "fraction sides must be integers".to_string(),
                })
            };
            Self::new(parse_int(num)?, parse_int(den)?)
        } else {
            Self::from_decimal_str(t)
        }
    }
}

impl PartialOrd for ExactRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &ExactRational) -> ExactRational {
                ExactRational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                $trait::$method(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(text: &str) -> ExactRational {
        text.parse().unwrap()
    }

    #[test]
    fn decimal_text_is_exact() {
        assert_eq!(q("0.1"), ExactRational::new(1.into(), 10.into()).unwrap());
        assert_eq!(q("2.5"), ExactRational::new(5.into(), 2.into()).unwrap());
        assert_eq!(q(".5"), q("1/2"));
        assert_eq!(q("5."), ExactRational::from_integer(5));
        assert_eq!(q("-0.25"), q("-1/4"));
        assert_eq!(q("52102"), ExactRational::from_integer(52102));
        assert_eq!(q("0.333"), q("333/1000"));
    }

    #[test]
    fn fractions_reduce() {
        assert_eq!(q("2/4"), q("1/2"));
        assert_eq!(q("-7/9").to_string(), "-7/9");
        assert_eq!(q("7/-9").to_string(), "-7/9");
        assert_eq!(q("4/2").to_string(), "2");
    }

    #[test]
    fn rejects_malformed_text() {
        for bad in ["", "abc", "1/0", "1.2.3", "1e5", "1/2/3", "0x10", "."] {
            assert!(bad.parse::<ExactRational>().is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn display_parse_round_trip() {
        for text in ["0", "1", "-3", "7/9", "-1/10", "355/113"] {
            let v = q(text);
            assert_eq!(v.to_string().parse::<ExactRational>().unwrap(), v);
        }
    }

    #[test]
    fn power_of_handles_signs() {
        assert_eq!(ExactRational::power_of(3, 4), q("81"));
        assert_eq!(ExactRational::power_of(3, -3), q("1/27"));
        assert_eq!(ExactRational::power_of(2, 0), q("1"));
    }

    #[test]
    fn nearest_integer_distance() {
        assert_eq!(q("0.9").distance_to_nearest_integer(), q("1/10"));
        assert_eq!(q("0.5").distance_to_nearest_integer(), q("1/2"));
        assert_eq!(q("3.25").distance_to_nearest_integer(), q("1/4"));
        assert_eq!(q("-0.3").distance_to_nearest_integer(), q("3/10"));
        assert_eq!(q("7").distance_to_nearest_integer(), q("0"));
    }

    #[test]
    fn ordering_is_exact() {
        assert!(q("1/3") < q("0.34"));
        assert!(q("0.33") < q("1/3"));
        assert!(q("-1/2") < q("0"));
    }

    #[test]
    fn small_ratio_parts_for_exponents() {
        assert_eq!(q("1/2").small_ratio_parts(), Some((1, 2)));
        assert_eq!(q("1").small_ratio_parts(), Some((1, 1)));
        assert_eq!(q("-1/2").small_ratio_parts(), None);
        assert_eq!(q("0").small_ratio_parts(), None);
    }

    #[test]
    fn floor_of_negatives() {
        assert_eq!(q("-1/2").floor_to_int(), BigInt::from(-1));
        assert_eq!(q("5/2").floor_to_int(), BigInt::from(2));
    }
}
