//! Exact non-negative rationals for regularization weights and objectives.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A reduced fraction `num / den` with `den > 0`.
///
/// Parses from `"3/200"`, `"0.015"`, `"1e-2"` or an integer, and prints as a
/// fraction. Decimal input is converted exactly, never through `f64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(Ratio<i64>);

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Rational(format!("{num}/{den}")));
        }
        Ok(Rational(Ratio::new(num, den)))
    }

    /// For constants already in lowest terms with a positive denominator.
    pub(crate) const fn new_reduced(num: i64, den: i64) -> Self {
        Rational(Ratio::new_raw(num, den))
    }

    pub fn zero() -> Self {
        Rational(Ratio::zero())
    }

    pub fn from_integer(v: i64) -> Self {
        Rational(Ratio::from_integer(v))
    }

    #[inline]
    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    #[inline]
    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.numer() < 0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn wide(&self) -> Ratio<i128> {
        Ratio::new(self.numer() as i128, self.denom() as i128)
    }
}

impl From<Ratio<i64>> for Rational {
    fn from(r: Ratio<i64>) -> Self {
        Rational(r)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Rational(s.to_string());
        let t = s.trim();
        if let Some((n, d)) = t.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            return Rational::new(n, d).map_err(|_| bad());
        }
        let (mantissa, exp) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (t, 0),
        };
        let (neg, mantissa) = match mantissa.strip_prefix('-') {
            Some(m) => (true, m),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let mut num: i128 = digits.parse().map_err(|_| bad())?;
        let scale = exp - frac_part.len() as i32;
        let mut den: i128 = 1;
        let pow = 10i128.checked_pow(scale.unsigned_abs()).ok_or_else(bad)?;
        if scale >= 0 {
            num = num.checked_mul(pow).ok_or_else(bad)?;
        } else {
            den = pow;
        }
        if neg {
            num = -num;
        }
        let r = Ratio::new(num, den);
        let n = i64::try_from(*r.numer()).map_err(|_| bad())?;
        let d = i64::try_from(*r.denom()).map_err(|_| bad())?;
        Rational::new(n, d)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Formats an exact value as `"a/b"` (or `"a"` when integral).
pub fn fraction_string(v: &Ratio<i128>) -> String {
    if *v.denom() == 1 {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn ratio_to_f64(v: &Ratio<i128>) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}
