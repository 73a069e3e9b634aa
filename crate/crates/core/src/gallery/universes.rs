//! The three pair universes `ℕ_0 × {second coordinate}` with case-split metrics.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{int, parse_rational, rat, unit_interval, Rational};
use crate::spaces::density::DensitySet;
use crate::spaces::{PointKind, Universe};

fn parse_pair(text: &str) -> Result<(u64, &str)> {
    let bad = || Error::Parse(format!("expected (n,x), got {text:?}"));
    let body = text.trim().strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
    let (n, x) = body.split_once(',').ok_or_else(bad)?;
    let n = n.trim().parse().map_err(|_| bad())?;
    Ok((n, x.trim()))
}

fn gap(n: u64, m: u64) -> u64 {
    n.abs_diff(m)
}

/// Points `(n, b)` with `b ∈ {0, 1}`.
#[derive(Debug, Clone)]
pub struct Example1Universe {
    pub a: Arc<dyn DensitySet>,
}

impl Universe for Example1Universe {
    type Point = (u64, u8);
    type Scalar = Rational;

    fn id(&self) -> String {
        format!("example1[A={}]", self.a.name())
    }

    fn kind(&self) -> PointKind {
        PointKind::PairOfNaturalsAndBinary
    }

    fn contains(&self, p: &(u64, u8)) -> bool {
        p.1 <= 1
    }

    fn metric(&self, p: &(u64, u8), q: &(u64, u8)) -> Rational {
        if p == q {
            int(0)
        } else if p.0 != q.0 {
            Rational::from_integer(gap(p.0, q.0).into())
        } else if self.a.contains(p.0) {
            Rational::new(1.into(), p.0.into())
        } else {
            int(1)
        }
    }

    fn format_point(&self, p: &(u64, u8)) -> String {
        format!("({},{})", p.0, p.1)
    }

    fn parse_point(&self, text: &str) -> Result<(u64, u8)> {
        let (n, b) = parse_pair(text)?;
        match b {
            "0" => Ok((n, 0)),
            "1" => Ok((n, 1)),
            _ => Err(Error::Parse(format!("second coordinate must be 0 or 1: {text:?}"))),
        }
    }
}

/// Points `(n, t)` with `t ∈ [0, 1]`; distances are floats because `2^n` grows
/// past any fixed precision.
#[derive(Debug, Clone)]
pub struct Example2Universe {
    pub a: Arc<dyn DensitySet>,
}

fn pow2(n: u64) -> f64 {
    if n > 1023 {
        f64::INFINITY
    } else {
        2f64.powi(n as i32)
    }
}

impl Universe for Example2Universe {
    type Point = (u64, Rational);
    type Scalar = f64;

    fn id(&self) -> String {
        format!("example2[A={}]", self.a.name())
    }

    fn kind(&self) -> PointKind {
        PointKind::PairOfNaturalsAndRational
    }

    fn contains(&self, p: &(u64, Rational)) -> bool {
        unit_interval(&p.1)
    }

    fn metric(&self, p: &(u64, Rational), q: &(u64, Rational)) -> f64 {
        if p == q {
            0.0
        } else if p.0 != q.0 {
            let (lo, hi) = (p.0.min(q.0), p.0.max(q.0));
            if hi > 1023 {
                f64::INFINITY
            } else {
                pow2(hi) - pow2(lo)
            }
        } else if self.a.contains(p.0) {
            p.0 as f64
        } else {
            2f64.powi(-(p.0.min(1100) as i32))
        }
    }

    fn format_point(&self, p: &(u64, Rational)) -> String {
        format!("({},{})", p.0, p.1)
    }

    fn parse_point(&self, text: &str) -> Result<(u64, Rational)> {
        let (n, t) = parse_pair(text)?;
        Ok((n, parse_rational(t)?))
    }
}

/// Points `(n, t)` with `t ∈ [0, 1]`.
#[derive(Debug, Clone)]
pub struct Example3Universe {
    pub a: Arc<dyn DensitySet>,
}

impl Universe for Example3Universe {
    type Point = (u64, Rational);
    type Scalar = Rational;

    fn id(&self) -> String {
        format!("example3[A={}]", self.a.name())
    }

    fn kind(&self) -> PointKind {
        PointKind::PairOfNaturalsAndRational
    }

    fn contains(&self, p: &(u64, Rational)) -> bool {
        unit_interval(&p.1)
    }

    fn metric(&self, p: &(u64, Rational), q: &(u64, Rational)) -> Rational {
        if p == q {
            int(0)
        } else if p.0 != q.0 {
            Rational::from_integer(gap(p.0, q.0).into())
        } else if self.a.contains(p.0) {
            int(1)
        } else {
            int(2)
        }
    }

    fn format_point(&self, p: &(u64, Rational)) -> String {
        format!("({},{})", p.0, p.1)
    }

    fn parse_point(&self, text: &str) -> Result<(u64, Rational)> {
        let (n, t) = parse_pair(text)?;
        Ok((n, parse_rational(t)?))
    }
}

/// `(n, x) ↦ (n + 1, x)`.
pub fn shift_first<X: Clone>(p: &(u64, X)) -> (u64, X) {
    (p.0 + 1, p.1.clone())
}

/// Second coordinates `0, 1/(k-1), …, 1` for sampling.
pub fn unit_steps(k: i64) -> Vec<Rational> {
    (0..k).map(|i| rat(i, (k - 1).max(1))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::density::{DoublingBlocks, FactorialBlocks, SquaredExponents};
    use crate::spaces::validate_metric;

    #[test]
    fn example1_cases() {
        let u = Example1Universe { a: Arc::new(FactorialBlocks) };
        assert_eq!(u.metric(&(3, 0), &(7, 1)), int(4));
        assert_eq!(u.metric(&(720, 0), &(720, 1)), rat(1, 720));
        assert_eq!(u.metric(&(6, 0), &(6, 1)), int(1));
        assert_eq!(u.metric(&(0, 0), &(0, 1)), int(1));
        assert_eq!(u.parse_point(" (12, 1)").unwrap(), (12, 1));
        assert!(u.parse_point("(1,2)").is_err());
        assert_eq!(u.format_point(&(5, 0)), "(5,0)");
        let sample: Vec<(u64, u8)> = (0..30).flat_map(|n| [(n, 0), (n, 1)]).collect();
        assert!(validate_metric(&u, &sample).pass());
        let late: Vec<(u64, u8)> = (715..726).flat_map(|n| [(n, 0), (n, 1)]).collect();
        assert!(validate_metric(&u, &late).pass());
    }

    #[test]
    fn example2_cases() {
        let u = Example2Universe { a: Arc::new(SquaredExponents) };
        assert_eq!(u.metric(&(16, rat(1, 3)), &(16, int(1))), 16.0);
        assert_eq!(u.metric(&(3, int(0)), &(3, int(1))), 0.125);
        assert_eq!(u.metric(&(1, int(0)), &(4, int(0))), 14.0);
        assert_eq!(u.metric(&(2000, int(0)), &(1, int(0))), f64::INFINITY);
        let sample: Vec<(u64, Rational)> = (0..18).flat_map(|n| unit_steps(3).into_iter().map(move |t| (n, t))).collect();
        assert!(validate_metric(&u, &sample).pass());
        assert!(!u.contains(&(0, rat(3, 2))));
    }

    #[test]
    fn example3_cases() {
        let u = Example3Universe { a: Arc::new(DoublingBlocks) };
        assert_eq!(u.metric(&(5, int(0)), &(5, rat(1, 2))), int(1));
        assert_eq!(u.metric(&(2, int(0)), &(2, rat(1, 2))), int(2));
        assert_eq!(u.metric(&(0, int(0)), &(0, int(1))), int(2));
        assert_eq!(u.metric(&(0, int(0)), &(9, int(1))), int(9));
        let sample: Vec<(u64, Rational)> = (0..40).flat_map(|n| unit_steps(3).into_iter().map(move |t| (n, t))).collect();
        assert!(validate_metric(&u, &sample).pass());
        assert_eq!(u.parse_point("(4,1/3)").unwrap(), (4, rat(1, 3)));
    }
}
