use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Rational};

use super::{PointKind, Universe};

/// A finitely supported rational sequence; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ShiftVector {
    coeffs: BTreeMap<usize, Rational>,
}

impl ShiftVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(index: usize) -> Self {
        Self::from_pairs([(index, Rational::from_integer(1.into()))])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut coeffs: BTreeMap<usize, Rational> = BTreeMap::new();
        for (k, c) in pairs {
            *coeffs.entry(k).or_insert_with(Rational::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        ShiftVector { coeffs }
    }

    pub fn coeff(&self, index: usize) -> Rational {
        self.coeffs.get(&index).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&usize, &Rational)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest index with a nonzero coefficient.
    pub fn max_index(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        Self::from_pairs(self.coeffs.iter().map(|(k, v)| (*k, v * c)))
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self::from_pairs(
            self.coeffs
                .iter()
                .chain(other.coeffs.iter())
                .map(|(k, v)| (*k, v.clone())),
        )
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scaled(&Rational::from_integer((-1).into())))
    }

    pub fn l1_norm(&self) -> Rational {
        self.coeffs.values().map(|c| c.abs()).sum()
    }

    /// Weighted backward shift: `T(x)_k = w * x_{k+1}`.
    pub fn backward_shift(&self, weight: &Rational) -> Self {
        Self::from_pairs(
            self.coeffs
                .iter()
                .filter(|(k, _)| **k > 0)
                .map(|(k, v)| (k - 1, v * weight)),
        )
    }
}

impl fmt::Display for ShiftVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (k, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}:{c}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for ShiftVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl std::str::FromStr for ShiftVector {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let body = text
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("sequence must be bracketed: {text:?}")))?;
        let mut pairs = Vec::new();
        for item in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, c) = item
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected index:coef, got {item:?}")))?;
            let k: usize = k
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad index {k:?}")))?;
            pairs.push((k, parse_rational(c)?));
        }
        Ok(Self::from_pairs(pairs))
    }
}

/// Finitely supported rational sequences with the l1 metric.
#[derive(Debug, Clone, Default)]
pub struct SequenceUniverse;

impl Universe for SequenceUniverse {
    type Point = ShiftVector;
    type Scalar = Rational;

    fn id(&self) -> String {
        "l1-sequences".into()
    }

    fn kind(&self) -> PointKind {
        PointKind::FinitelySupportedRationalSequence
    }

    fn contains(&self, _p: &ShiftVector) -> bool {
        true
    }

    fn metric(&self, p: &ShiftVector, q: &ShiftVector) -> Rational {
        p.minus(q).l1_norm()
    }

    fn format_point(&self, p: &ShiftVector) -> String {
        p.to_string()
    }

    fn parse_point(&self, text: &str) -> Result<ShiftVector> {
        text.parse()
    }

    fn add(&self, p: &ShiftVector, q: &ShiftVector) -> Result<ShiftVector> {
        Ok(p.plus(q))
    }

    fn origin(&self) -> Result<ShiftVector> {
        Ok(ShiftVector::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn shift_drops_index_zero() {
        let w = int(2);
        let mut x = ShiftVector::unit(2);
        x = x.backward_shift(&w);
        x = x.backward_shift(&w);
        assert_eq!(x, ShiftVector::unit(0).scaled(&int(4)));
        assert!(x.backward_shift(&w).is_zero());
    }

    #[test]
    fn l1_distance() {
        let a = ShiftVector::from_pairs([(0, rat(1, 2)), (3, int(-2))]);
        let b = ShiftVector::unit(3);
        assert_eq!(SequenceUniverse.metric(&a, &b), rat(7, 2));
    }

    #[test]
    fn text_round_trip() {
        let a = ShiftVector::from_pairs([(0, rat(1, 2)), (3, int(-2))]);
        let text = a.to_string();
        assert_eq!(text, "[0:1/2,3:-2]");
        assert_eq!(text.parse::<ShiftVector>().unwrap(), a);
        assert_eq!("[]".parse::<ShiftVector>().unwrap(), ShiftVector::zero());
        assert!("0:1".parse::<ShiftVector>().is_err());
    }

    #[test]
    fn cancellation_removes_support() {
        let a = ShiftVector::unit(4);
        assert!(a.minus(&a).is_zero());
        assert_eq!(a.minus(&a).max_index(), None);
    }
}
