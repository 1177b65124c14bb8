//! Exact rational arithmetic helpers.
//!
//! All statistics in this crate are exact. Rationals travel through JSON and
//! the command line as `"num/den"` strings; decimal literals such as `"1.19"`
//! are also accepted on input and converted exactly.

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

pub fn rat(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

pub fn int(v: i128) -> Rational {
    Rational::from_integer(v)
}

/// Parses `"3/4"`, `"-2"`, `"0.75"` or `"1e-3"`-free decimals exactly.
pub fn parse_rational(input: &str) -> Result<Rational> {
    let s = input.trim();
    let err = || Error::Parse {
        what: "rational",
        input: input.to_string(),
    };
    if let Some((n, d)) = s.split_once('/') {
        let n: i128 = n.trim().parse().map_err(|_| err())?;
        let d: i128 = d.trim().parse().map_err(|_| err())?;
        if d == 0 {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 30 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let w: i128 = if whole_digits.is_empty() {
            0
        } else {
            whole_digits.parse().map_err(|_| err())?
        };
        let f: i128 = frac.parse().map_err(|_| err())?;
        let den = 10i128.checked_pow(frac.len() as u32).ok_or_else(err)?;
        let mag = Rational::new(w * den + f, den);
        return Ok(if negative { -mag } else { mag });
    }
    s.parse::<i128>().map(Rational::from_integer).map_err(|_| err())
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `r` lies strictly between 0 and 1.
pub fn is_open_unit(r: &Rational) -> bool {
    r.is_positive() && *r < Rational::from_integer(1)
}

pub fn is_nonneg(r: &Rational) -> bool {
    !r.is_negative() || r.is_zero()
}

/// Serde adapter writing a [`Rational`] as a `"num/den"` string.
pub mod serde_str {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
        }
        match Repr::deserialize(d)? {
            Repr::Text(s) => parse_rational(&s).map_err(de::Error::custom),
            Repr::Int(v) => Ok(Rational::from_integer(v as i128)),
        }
    }
}

/// Same as [`serde_str`] for vectors.
pub mod serde_str_vec {
    use super::*;
    use serde::{de, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s).map_err(de::Error::custom))
            .collect()
    }
}
