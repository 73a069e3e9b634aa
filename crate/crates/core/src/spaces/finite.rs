use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{PointKind, Universe};

/// Finitely many points `0..n` with a stored distance matrix.
#[derive(Debug, Clone)]
pub struct FiniteUniverse<S: Scalar> {
    name: String,
    matrix: Vec<Vec<S>>,
}

impl<S: Scalar> FiniteUniverse<S> {
    /// Validates squareness, zero diagonal, positivity off the diagonal and symmetry.
    /// The triangle inequality is left to [`super::validate_metric`].
    pub fn from_matrix(name: impl Into<String>, matrix: Vec<Vec<S>>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 {
            return Err(Error::Domain("empty universe".into()));
        }
        let zero = S::nought();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Domain(format!("row {i} has length {}", row.len())));
            }
            for (j, d) in row.iter().enumerate() {
                if (i == j) != (*d == zero) || d.lt_tol(&zero) {
                    return Err(Error::Domain(format!("bad entry d({i},{j}) = {d}")));
                }
                if !d.eq_tol(&matrix[j][i]) {
                    return Err(Error::Domain(format!("asymmetric at ({i},{j})")));
                }
            }
        }
        Ok(FiniteUniverse {
            name: name.into(),
            matrix,
        })
    }

    /// No validation at all; used to exercise the axiom checker.
    pub fn unchecked(name: impl Into<String>, matrix: Vec<Vec<S>>) -> Self {
        FiniteUniverse {
            name: name.into(),
            matrix,
        }
    }

    /// Points on the real line with the absolute-value metric.
    pub fn on_line(name: impl Into<String>, coords: &[S]) -> Result<Self> {
        let matrix = coords
            .iter()
            .map(|a| coords.iter().map(|b| a.abs_diff(b)).collect())
            .collect();
        Self::from_matrix(name, matrix)
    }

    /// Points of the plane with the taxicab metric.
    pub fn in_plane(name: impl Into<String>, coords: &[(S, S)]) -> Result<Self> {
        let matrix = coords
            .iter()
            .map(|(ax, ay)| {
                coords
                    .iter()
                    .map(|(bx, by)| ax.abs_diff(bx).plus(&ay.abs_diff(by)))
                    .collect()
            })
            .collect();
        Self::from_matrix(name, matrix)
    }

    pub fn len(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.matrix.len()
    }
}

impl<S: Scalar> Universe for FiniteUniverse<S> {
    type Point = usize;
    type Scalar = S;

    fn id(&self) -> String {
        format!("finite:{}:{}", self.name, self.matrix.len())
    }

    fn kind(&self) -> PointKind {
        PointKind::FiniteEnumerated
    }

    fn contains(&self, p: &usize) -> bool {
        *p < self.matrix.len()
    }

    fn metric(&self, p: &usize, q: &usize) -> S {
        self.matrix[*p][*q].clone()
    }

    fn format_point(&self, p: &usize) -> String {
        p.to_string()
    }

    fn parse_point(&self, text: &str) -> Result<usize> {
        let p: usize = text
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad point index {text:?}")))?;
        if self.contains(&p) {
            Ok(p)
        } else {
            Err(Error::Domain(format!("point {p} not in {}", self.id())))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, Rational};
    use crate::spaces::validate_metric;

    #[test]
    fn plane_metric_is_valid() {
        let pts: Vec<(Rational, Rational)> =
            vec![(int(0), int(0)), (rat(1, 2), int(2)), (int(-1), rat(1, 3))];
        let u = FiniteUniverse::in_plane("p", &pts).unwrap();
        assert_eq!(u.metric(&0, &1), rat(5, 2));
        assert!(validate_metric(&u, &[0, 1, 2]).pass());
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(FiniteUniverse::<Rational>::from_matrix("e", vec![]).is_err());
        let dup = vec![vec![int(0), int(0)], vec![int(0), int(0)]];
        assert!(FiniteUniverse::from_matrix("d", dup).is_err());
        let asym = vec![vec![int(0), int(1)], vec![int(2), int(0)]];
        assert!(FiniteUniverse::from_matrix("a", asym).is_err());
    }

    #[test]
    fn parse_point_checks_range() {
        let u = FiniteUniverse::on_line("l", &[int(0), int(1)]).unwrap();
        assert_eq!(u.parse_point("1").unwrap(), 1);
        assert!(u.parse_point("2").is_err());
        assert!(u.parse_point("x").is_err());
    }
}
