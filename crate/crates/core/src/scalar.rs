//! Numeric tower: exact rationals for the example universes, tolerant floats otherwise.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Absolute tolerance used by every comparison on float universes.
pub const FLOAT_TOL: f64 = 1e-9;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub trait Scalar: Clone + Debug + Display + PartialEq + PartialOrd + Send + Sync + 'static {
    const EXACT: bool;

    fn nought() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn halve(&self) -> Self;
    fn to_f64(&self) -> f64;
    /// Exact order for rationals; equality within [`FLOAT_TOL`] for floats.
    fn cmp_tol(&self, other: &Self) -> Ordering;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&int(n))
    }

    fn unit() -> Self {
        Self::from_int(1)
    }

    fn abs_diff(&self, other: &Self) -> Self {
        if self.cmp_tol(other) == Ordering::Less {
            other.minus(self)
        } else {
            self.minus(other)
        }
    }

    fn le_tol(&self, other: &Self) -> bool {
        self.cmp_tol(other) != Ordering::Greater
    }

    fn lt_tol(&self, other: &Self) -> bool {
        self.cmp_tol(other) == Ordering::Less
    }

    fn eq_tol(&self, other: &Self) -> bool {
        self.cmp_tol(other) == Ordering::Equal
    }

    fn max_of(&self, other: &Self) -> Self {
        if self.lt_tol(other) {
            other.clone()
        } else {
            self.clone()
        }
    }

    fn min_of(&self, other: &Self) -> Self {
        if other.lt_tol(self) {
            other.clone()
        } else {
            self.clone()
        }
    }

    /// `max(0, self - other)`.
    fn pos_part_minus(&self, other: &Self) -> Self {
        if other.lt_tol(self) {
            self.minus(other)
        } else {
            Self::nought()
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn nought() -> Self {
        Zero::zero()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn halve(&self) -> Self {
        self / int(2)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn cmp_tol(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn unit() -> Self {
        One::one()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn nought() -> Self {
        0.0
    }
    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn halve(&self) -> Self {
        self / 2.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn cmp_tol(&self, other: &Self) -> Ordering {
        if self == other || (self - other).abs() <= FLOAT_TOL {
            Ordering::Equal
        } else {
            self.partial_cmp(other).unwrap_or(Ordering::Equal)
        }
    }
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.375` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let all_digits = |t: &str| t.chars().all(|c| c.is_ascii_digit());
    if !all_digits(whole) || !all_digits(frac) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let r = Rational::new(num, den);
    Ok(if neg { -r } else { r })
}

pub fn is_level(r: &Rational) -> bool {
    r.is_positive() && *r <= Rational::one()
}

pub fn unit_interval(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}

/// Serde adapter: rationals are written as `p/q` strings and read from strings or numbers.
pub mod rational_serde {
    use serde::{de, Deserialize, Deserializer, Serializer};

    use super::{parse_rational, Rational};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Text(String),
        Int(i64),
        Float(f64),
    }

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = match Raw::deserialize(d)? {
            Raw::Text(t) => t,
            Raw::Int(n) => n.to_string(),
            Raw::Float(x) => x.to_string(),
        };
        parse_rational(&text).map_err(de::Error::custom)
    }

    pub mod option {
        use serde::{Deserialize, Deserializer, Serializer};

        use super::Rational;

        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "super")] Rational);

        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => super::serialize(r, s),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/12").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("0.375").unwrap(), rat(3, 8));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn float_comparison_is_tolerant() {
        assert!(1.0f64.eq_tol(&(1.0 + 1e-12)));
        assert!(1.0f64.lt_tol(&1.001));
        assert_eq!(f64::INFINITY.cmp_tol(&f64::INFINITY), Ordering::Equal);
    }

    #[test]
    fn exact_helpers() {
        let a = rat(1, 3);
        let b = rat(1, 2);
        assert_eq!(a.abs_diff(&b), rat(1, 6));
        assert_eq!(b.pos_part_minus(&a), rat(1, 6));
        assert_eq!(a.pos_part_minus(&b), int(0));
        assert_eq!(a.max_of(&b), b);
        assert_eq!(rat(3, 4).halve(), rat(3, 8));
    }
}
