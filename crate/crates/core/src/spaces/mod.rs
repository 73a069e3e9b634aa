//! Point universes, distance oracles and the base map.

pub mod config;
pub mod density;
pub mod finite;
pub mod sequence;

use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointKind {
    FiniteEnumerated,
    PairOfNaturalsAndBinary,
    PairOfNaturalsAndRational,
    FinitelySupportedRationalSequence,
}

/// A possibly infinite metric space given by oracles. Only finitely many
/// points are ever materialized.
pub trait Universe: Send + Sync + 'static {
    type Point: Clone + Eq + Ord + Hash + Debug + Send + Sync + 'static;
    type Scalar: Scalar;

    /// Identifier including every parameter that affects the metric.
    fn id(&self) -> String;
    fn kind(&self) -> PointKind;
    fn contains(&self, p: &Self::Point) -> bool;
    /// Distance with no membership check.
    fn metric(&self, p: &Self::Point, q: &Self::Point) -> Self::Scalar;
    fn format_point(&self, p: &Self::Point) -> String;
    fn parse_point(&self, text: &str) -> Result<Self::Point>;

    fn add(&self, _p: &Self::Point, _q: &Self::Point) -> Result<Self::Point> {
        Err(Error::Unsupported(format!("{} has no addition", self.id())))
    }

    fn origin(&self) -> Result<Self::Point> {
        Err(Error::Unsupported(format!("{} has no zero vector", self.id())))
    }
}

pub type PointOf<U> = <U as Universe>::Point;
pub type ScalarOf<U> = <U as Universe>::Scalar;

pub fn distance<U: Universe>(universe: &U, p: &U::Point, q: &U::Point) -> Result<U::Scalar> {
    for x in [p, q] {
        if !universe.contains(x) {
            return Err(Error::Domain(format!(
                "point {} not in {}",
                universe.format_point(x),
                universe.id()
            )));
        }
    }
    Ok(universe.metric(p, q))
}

type MapFn<P> = dyn Fn(&P) -> P + Send + Sync;

/// A universe together with a deterministic self-map.
pub struct System<U: Universe> {
    universe: Arc<U>,
    name: String,
    map: Arc<MapFn<U::Point>>,
}

impl<U: Universe> Clone for System<U> {
    fn clone(&self) -> Self {
        System {
            universe: Arc::clone(&self.universe),
            name: self.name.clone(),
            map: Arc::clone(&self.map),
        }
    }
}

impl<U: Universe> System<U> {
    pub fn new(
        universe: Arc<U>,
        name: impl Into<String>,
        map: impl Fn(&U::Point) -> U::Point + Send + Sync + 'static,
    ) -> Self {
        System {
            universe,
            name: name.into(),
            map: Arc::new(map),
        }
    }

    pub fn identity(universe: Arc<U>) -> Self {
        Self::new(universe, "identity", |p: &U::Point| p.clone())
    }

    pub fn universe(&self) -> &Arc<U> {
        &self.universe
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, p: &U::Point) -> U::Point {
        (self.map)(p)
    }

    pub fn iterate(&self, p: &U::Point, n: usize) -> U::Point {
        let mut x = p.clone();
        for _ in 0..n {
            x = self.apply(&x);
        }
        x
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxiomKind {
    Membership,
    Negative,
    Identity,
    Symmetry,
    Triangle,
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub axiom: AxiomKind,
    pub points: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct MetricReport {
    pub universe: String,
    pub sample_size: usize,
    pub violations: Vec<Violation>,
}

impl MetricReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the metric axioms over every pair and triple of `sample`.
pub fn validate_metric<U: Universe>(universe: &U, sample: &[U::Point]) -> MetricReport {
    let fmt = |p: &U::Point| universe.format_point(p);
    let mut violations = Vec::new();
    let mut push = |axiom, pts: &[&U::Point], detail: String| {
        violations.push(Violation {
            axiom,
            points: pts.iter().map(|p| fmt(p)).collect(),
            detail,
        })
    };
    let members: Vec<&U::Point> = sample
        .iter()
        .filter(|p| {
            let ok = universe.contains(p);
            if !ok {
                push(AxiomKind::Membership, &[*p], "not a member".into());
            }
            ok
        })
        .collect();
    let zero = U::Scalar::nought();
    let n = members.len();
    let mut table = vec![vec![zero.clone(); n]; n];
    for (i, p) in members.iter().enumerate() {
        for (j, q) in members.iter().enumerate() {
            table[i][j] = universe.metric(p, q);
        }
    }
    for i in 0..n {
        for j in 0..n {
            let d = &table[i][j];
            let (p, q) = (members[i], members[j]);
            if d.lt_tol(&zero) {
                push(AxiomKind::Negative, &[p, q], format!("d = {d}"));
            }
            if (p == q) != (*d == zero) {
                push(AxiomKind::Identity, &[p, q], format!("d = {d}"));
            }
            if j > i && !d.eq_tol(&table[j][i]) {
                push(
                    AxiomKind::Symmetry,
                    &[p, q],
                    format!("d(p,q) = {d}, d(q,p) = {}", table[j][i]),
                );
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let via = table[i][j].plus(&table[j][k]);
                if !table[i][k].le_tol(&via) {
                    push(
                        AxiomKind::Triangle,
                        &[members[i], members[j], members[k]],
                        format!("{} > {} + {}", table[i][k], table[i][j], table[j][k]),
                    );
                }
            }
        }
    }
    MetricReport {
        universe: universe.id(),
        sample_size: sample.len(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::finite::FiniteUniverse;
    use super::*;
    use crate::scalar::{int, Rational};

    fn line() -> Arc<FiniteUniverse<Rational>> {
        Arc::new(FiniteUniverse::on_line("line", &[int(0), int(1), int(3)]).unwrap())
    }

    #[test]
    fn distance_checks_membership() {
        let u = line();
        assert_eq!(distance(u.as_ref(), &0, &2).unwrap(), int(3));
        assert_eq!(distance(u.as_ref(), &1, &1).unwrap(), int(0));
        assert!(matches!(distance(u.as_ref(), &0, &7), Err(Error::Domain(_))));
    }

    #[test]
    fn corrupted_symmetry_is_reported() {
        let m = vec![
            vec![int(0), int(1), int(2)],
            vec![int(3), int(0), int(1)],
            vec![int(2), int(1), int(0)],
        ];
        let u = FiniteUniverse::unchecked("bad", m);
        let report = validate_metric(&u, &[0, 1, 2]);
        assert!(report.violations.iter().any(|v| v.axiom == AxiomKind::Symmetry));
        assert!(!report.pass());
    }

    #[test]
    fn single_point_sample_passes() {
        let u = line();
        assert!(validate_metric(u.as_ref(), &[1]).pass());
    }

    #[test]
    fn triangle_violation_is_reported() {
        let m = vec![
            vec![int(0), int(1), int(5)],
            vec![int(1), int(0), int(1)],
            vec![int(5), int(1), int(0)],
        ];
        let u = FiniteUniverse::unchecked("bad", m);
        let report = validate_metric(&u, &[0, 1, 2]);
        assert!(report.violations.iter().any(|v| v.axiom == AxiomKind::Triangle));
    }

    #[test]
    fn iterate_zero_is_identity() {
        let u = line();
        let sys = System::new(u, "rotate", |p: &usize| (p + 1) % 3);
        assert_eq!(sys.iterate(&2, 0), 2);
        assert_eq!(sys.iterate(&2, 4), 0);
    }
}
