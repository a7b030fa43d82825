//! Scalar types usable as edge weights and family values.
//!
//! Every algorithm in this crate is written against [`Scalar`]. The exact
//! rational implementations compare with `==`; the float implementations
//! compare within [`FLOAT_TOLERANCE`] and exist only for float-typed inputs.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed};

use crate::error::{Error, Result};

/// Absolute tolerance used by the float scalar implementations.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

pub trait Scalar: Num + Signed + Clone + PartialOrd + Debug + Send + Sync + 'static {
    /// Equality as used by every "does not depend on" test.
    fn same(&self, other: &Self) -> bool;

    fn from_ratio(numer: i64, denom: i64) -> Self;

    /// Parses integers, `a/b` fractions and decimal strings (with an
    /// optional exponent). Rationals parse decimals exactly.
    fn parse_value(text: &str) -> Result<Self>;

    fn render(&self) -> String;

    /// Whether this scalar type compares exactly.
    fn is_exact() -> bool;

    fn is_zeroish(&self) -> bool {
        self.same(&Self::zero())
    }

    fn is_strictly_positive(&self) -> bool {
        !self.is_zeroish() && *self > Self::zero()
    }

    fn from_count(count: usize) -> Self {
        Self::from_ratio(count as i64, 1)
    }
}

impl<T> Scalar for Ratio<T>
where
    T: Clone + Integer + Signed + FromPrimitive + FromStr + Display + Debug + Send + Sync + 'static,
{
    fn same(&self, other: &Self) -> bool {
        self == other
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        let numer = T::from_i64(numer).expect("numerator fits the integer type");
        let denom = T::from_i64(denom).expect("denominator fits the integer type");
        Ratio::new(numer, denom)
    }

    fn parse_value(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some((numer, denom)) = text.split_once('/') {
            let numer = parse_integer::<T>(numer.trim())?;
            let denom = parse_integer::<T>(denom.trim())?;
            if denom.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            return Ok(Ratio::new(numer, denom));
        }
        let decimal = Decimal::split(text)?;
        let mantissa = parse_integer::<T>(&decimal.digits)?;
        let mantissa = if decimal.negative { -mantissa } else { mantissa };
        let ten = T::from_u8(10).expect("ten fits the integer type");
        let mut scale = T::one();
        for _ in 0..decimal.exponent.unsigned_abs() {
            scale = scale * ten.clone();
        }
        Ok(if decimal.exponent >= 0 {
            Ratio::from_integer(mantissa * scale)
        } else {
            Ratio::new(mantissa, scale)
        })
    }

    fn render(&self) -> String {
        self.to_string()
    }

    fn is_exact() -> bool {
        true
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn same(&self, other: &Self) -> bool {
                ((*self - *other).abs() as f64) <= FLOAT_TOLERANCE
            }

            fn from_ratio(numer: i64, denom: i64) -> Self {
                numer as $t / denom as $t
            }

            fn parse_value(text: &str) -> Result<Self> {
                let text = text.trim();
                if let Some((numer, denom)) = text.split_once('/') {
                    let numer: $t = numer.trim().parse().map_err(|_| bad_number(text))?;
                    let denom: $t = denom.trim().parse().map_err(|_| bad_number(text))?;
                    if denom == 0.0 {
                        return Err(Error::Parse(format!("zero denominator in {text:?}")));
                    }
                    return Ok(numer / denom);
                }
                let value: $t = text.parse().map_err(|_| bad_number(text))?;
                if !value.is_finite() {
                    return Err(bad_number(text));
                }
                Ok(value)
            }

            fn render(&self) -> String {
                self.to_string()
            }

            fn is_exact() -> bool {
                false
            }
        }
    };
}

float_scalar!(f64);
float_scalar!(f32);

fn bad_number(text: &str) -> Error {
    Error::Parse(format!("not a number: {text:?}"))
}

fn parse_integer<T: FromStr>(text: &str) -> Result<T> {
    let text = text.strip_prefix('+').unwrap_or(text);
    if text.is_empty() {
        return Err(bad_number(text));
    }
    text.parse().map_err(|_| bad_number(text))
}

/// A decimal literal split into sign, significant digits and power of ten.
struct Decimal {
    negative: bool,
    digits: String,
    exponent: i64,
}

impl Decimal {
    fn split(text: &str) -> Result<Self> {
        let (negative, body) = match text.as_bytes().first() {
            Some(b'-') => (true, &text[1..]),
            Some(b'+') => (false, &text[1..]),
            _ => (false, text),
        };
        let (mantissa, exponent) = match body.find(['e', 'E']) {
            Some(pos) => {
                let exp: i64 = parse_integer(&body[pos + 1..])?;
                (&body[..pos], exp)
            }
            None => (body, 0),
        };
        let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad_number(text));
        }
        if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(bad_number(text));
        }
        let mut digits = String::with_capacity(int_part.len() + frac_part.len());
        digits.push_str(int_part);
        digits.push_str(frac_part);
        Ok(Decimal {
            negative,
            digits,
            exponent: exponent - frac_part.len() as i64,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rational_parsing_is_exact() {
        assert_eq!(Rational::parse_value("3/2").unwrap(), q(3, 2));
        assert_eq!(Rational::parse_value("-1.25").unwrap(), q(-5, 4));
        assert_eq!(Rational::parse_value("0.1").unwrap(), q(1, 10));
        assert_eq!(Rational::parse_value("2.5e-1").unwrap(), q(1, 4));
        assert_eq!(Rational::parse_value("7").unwrap(), q(7, 1));
        assert_eq!(Rational::parse_value("1E2").unwrap(), q(100, 1));
        assert_eq!(Rational::parse_value(".5").unwrap(), q(1, 2));
        assert!(Rational::parse_value("1/0").is_err());
        assert!(Rational::parse_value("abc").is_err());
        assert!(Rational::parse_value("").is_err());
        assert!(Rational::parse_value("1.2.3").is_err());
    }

    #[test]
    fn rendering_round_trips() {
        for text in ["3/2", "-7", "0", "-5/4"] {
            let v = Rational::parse_value(text).unwrap();
            assert_eq!(v.render(), text);
        }
    }

    #[test]
    fn float_tolerance() {
        assert!(0.1f64.same(&(0.3 - 0.2)));
        assert!(!1.0f64.same(&1.001));
        assert_eq!(f64::parse_value("3/4").unwrap(), 0.75);
        assert!(f64::parse_value("inf").is_err());
        assert!(!f64::is_exact());
    }

    #[test]
    fn small_ratio_type_works() {
        let v = num_rational::Rational64::parse_value("-0.75").unwrap();
        assert_eq!(v, num_rational::Rational64::new(-3, 4));
    }
}
