//! Arbitrary-precision rationals and their textual form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::LinalgError;

/// Exact rational number in lowest terms with a positive denominator.
pub type Rat = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rat {
    Rat::from_integer(BigInt::from(value))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// Parses `"p"` or `"p/q"`; surrounding whitespace is ignored.
pub fn parse_rat(text: &str) -> Result<Rat, LinalgError> {
    let text = text.trim();
    let bad = || LinalgError::Parse(format!("not a rational: {text:?}"));
    match text.split_once('/') {
        None => text
            .parse::<BigInt>()
            .map(Rat::from_integer)
            .map_err(|_| bad()),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(LinalgError::Parse(format!("zero denominator in {text:?}")));
            }
            Ok(Rat::new(p, q))
        }
    }
}

/// `"p/q"`, or `"p"` when the value is an integer.
pub fn format_rat(value: &Rat) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn to_f64(value: &Rat) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        // Ratio::to_f64 only fails on overflow of both parts.
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// `ln |value|` without overflowing, for values far outside the `f64` range.
pub fn ln_abs(value: &Rat) -> f64 {
    fn ln_big(x: &BigInt) -> f64 {
        let bits = x.bits();
        if bits <= 1000 {
            return x.to_f64().map_or(f64::INFINITY, |v| v.abs().ln());
        }
        let shift = bits - 64;
        let top = (x.abs() >> shift).to_f64().expect("64-bit value");
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
    ln_big(value.numer()) - ln_big(value.denom())
}

/// Exact binary value of a finite float.
pub fn from_f64(value: f64) -> Option<Rat> {
    Rat::from_float(value)
}

pub(crate) mod serde_rat {
    use super::{format_rat, parse_rat, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let text = String::deserialize(d)?;
        parse_rat(&text).map_err(serde::de::Error::custom)
    }
}

pub(crate) mod serde_rat_vec {
    use super::{format_rat, parse_rat, Rat};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(values: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        values
            .iter()
            .map(format_rat)
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_rat(t).map_err(serde::de::Error::custom))
            .collect()
    }
}
