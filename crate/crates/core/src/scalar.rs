//! Numeric abstractions shared by weights, objective values and matrix entries.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A weight or objective value. Anything ordered, signed and convertible to
/// `f64` for reporting: `f64`, `i64`, and exact rationals all qualify.
///
/// Marginal gains of non-monotone objectives can be negative, hence `Signed`.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + fmt::Debug + ToPrimitive + FromPrimitive + Send + Sync + 'static
{
    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl<T> Scalar for T where
    T: Num + Signed + Clone + PartialOrd + fmt::Debug + ToPrimitive + FromPrimitive + Send + Sync + 'static
{
}

/// Field used for linear-matroid representations. Independence tests are
/// only exact when the field arithmetic is exact (rationals, not floats).
pub trait Field: Num + Clone + fmt::Debug + Send + Sync + 'static {}

impl<T> Field for T where T: Num + Clone + fmt::Debug + Send + Sync + 'static {}

pub type Rational = BigRational;

/// A scalar that converts to and from the exact values used in files.
pub trait Weight: Scalar {
    fn from_exact(value: &Rational) -> Result<Self>;
    fn to_exact(&self) -> Result<Rational>;
}

impl Weight for Rational {
    fn from_exact(value: &Rational) -> Result<Self> {
        Ok(value.clone())
    }

    fn to_exact(&self) -> Result<Rational> {
        Ok(self.clone())
    }
}

impl Weight for i64 {
    fn from_exact(value: &Rational) -> Result<Self> {
        value
            .is_integer()
            .then(|| value.numer().to_i64())
            .flatten()
            .ok_or_else(|| Error::Parse(format!("{} is not a 64-bit integer", format_rational(value))))
    }

    fn to_exact(&self) -> Result<Rational> {
        Ok(Rational::from_integer((*self).into()))
    }
}

impl Weight for f64 {
    fn from_exact(value: &Rational) -> Result<Self> {
        value
            .to_f64()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::Parse(format!("{} overflows f64", format_rational(value))))
    }

    fn to_exact(&self) -> Result<Rational> {
        Rational::from_float(*self).ok_or_else(|| Error::Parse(format!("{self} is not finite")))
    }
}

/// Sum of `values[i]` over the given ids.
pub fn total<W: Scalar>(values: &[W], ids: &[usize]) -> W {
    ids.iter().fold(W::zero(), |acc, &i| acc + values[i].clone())
}

/// Rejects negative (and, for floats, NaN) weights.
pub fn validate_weights<W: Scalar>(weights: &[W]) -> Result<()> {
    for (i, w) in weights.iter().enumerate() {
        if !(*w >= W::zero()) {
            return Err(Error::InvalidArgument(format!(
                "weight of element {i} is {w:?}; weights must be nonnegative"
            )));
        }
    }
    Ok(())
}

/// Parses `"7"`, `"-3/4"` or `"1.25"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if let Some((num, den)) = text.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int, frac)) = text.split_once('.') {
        let negative = int.starts_with('-');
        let int_part = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str(int).map_err(|_| bad())?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_part = Rational::new(BigInt::from_str(frac).map_err(|_| bad())?, scale);
        let magnitude = Rational::from_integer(int_part.abs()) + frac_part;
        return Ok(if negative { -magnitude } else { magnitude });
    }
    BigInt::from_str(text)
        .map(Rational::from_integer)
        .map_err(|_| bad())
}

/// Integers print as integers, everything else as `"p/q"`.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Exact rational as it appears in JSON files: either a JSON integer or a
/// decimal/fraction string.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactValue(pub Rational);

impl From<Rational> for ExactValue {
    fn from(value: Rational) -> Self {
        ExactValue(value)
    }
}

impl From<i64> for ExactValue {
    fn from(value: i64) -> Self {
        ExactValue(Rational::from_integer(value.into()))
    }
}

impl Serialize for ExactValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.denom().is_one() {
            if let Some(v) = self.0.numer().to_i64() {
                return serializer.serialize_i64(v);
            }
        }
        serializer.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for ExactValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ExactVisitor;

        impl Visitor<'_> for ExactVisitor {
            type Value = ExactValue;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a rational string such as \"3/4\" or \"0.25\"")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ExactValue, E> {
                Ok(ExactValue::from(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ExactValue, E> {
                Ok(ExactValue(Rational::from_integer(v.into())))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<ExactValue, E> {
                Err(E::custom(format!(
                    "floating-point literal {v} is not exact; quote it as a decimal string"
                )))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ExactValue, E> {
                parse_rational(v).map(ExactValue).map_err(E::custom)
            }
        }

        deserializer.deserialize_any(ExactVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn parses_integers_fractions_and_decimals() {
        assert_eq!(parse_rational("7").unwrap(), q(7, 1));
        assert_eq!(parse_rational("-3/4").unwrap(), q(-3, 4));
        assert_eq!(parse_rational("6/8").unwrap(), q(3, 4));
        assert_eq!(parse_rational("1.25").unwrap(), q(5, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), q(-1, 2));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1/0", "1.2.3", "1.", "3/x"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn exact_value_json_round_trip() {
        let values: Vec<ExactValue> = serde_json::from_str(r#"[3, "5/2", "0.75", -1]"#).unwrap();
        assert_eq!(values[1].0, q(5, 2));
        assert_eq!(values[2].0, q(3, 4));
        let text = serde_json::to_string(&values).unwrap();
        assert_eq!(text, r#"[3,"5/2","3/4",-1]"#);
        assert!(serde_json::from_str::<ExactValue>("0.5").is_err());
    }

    #[test]
    fn weight_conversions() {
        assert_eq!(i64::from_exact(&q(6, 2)).unwrap(), 3);
        assert!(i64::from_exact(&q(1, 2)).is_err());
        assert_eq!(f64::from_exact(&q(1, 4)).unwrap(), 0.25);
        assert_eq!(0.75f64.to_exact().unwrap(), q(3, 4));
        assert!(f64::NAN.to_exact().is_err());
    }

    #[test]
    fn weight_validation() {
        assert!(validate_weights(&[0.0, 1.5]).is_ok());
        assert!(validate_weights(&[1.0, -0.1]).is_err());
        assert!(validate_weights(&[f64::NAN]).is_err());
        assert!(validate_weights(&[q(1, 3), q(0, 1)]).is_ok());
    }
}
