//! The supremum, Skorokhod, sendograph and endograph metrics behind one trait.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyper::directed_by;
use crate::scalar::{Rational, Scalar};
use crate::spaces::Universe;

use super::{check_same, skorokhod, StepFuzzySet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricKind {
    Sup,
    Skorokhod,
    Sendograph,
    Endograph,
}

impl MetricKind {
    pub const ALL: [MetricKind; 4] = [
        MetricKind::Sup,
        MetricKind::Skorokhod,
        MetricKind::Sendograph,
        MetricKind::Endograph,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Sup => "sup",
            MetricKind::Skorokhod => "skorokhod",
            MetricKind::Sendograph => "sendograph",
            MetricKind::Endograph => "endograph",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MetricKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown metric {s:?}")))
    }
}

pub trait FuzzyMetric<U: Universe>: Send + Sync {
    fn kind(&self) -> MetricKind;
    fn distance(&self, u: &StepFuzzySet<U>, v: &StepFuzzySet<U>) -> Result<U::Scalar>;

    fn name(&self) -> &'static str {
        self.kind().name()
    }
}

/// `sup_γ d_H(u_γ, v_γ)`.
pub struct SupMetric;
pub struct SkorokhodMetric;
/// Hausdorff distance between sendographs.
pub struct SendographMetric;
/// Hausdorff distance between endographs.
pub struct EndographMetric;

/// Level sets of both sets at every merged breakpoint γ; these are the sets on `(γ_prev, γ]`.
pub(crate) fn merged_level_pairs<U: Universe>(
    u: &StepFuzzySet<U>,
    v: &StepFuzzySet<U>,
) -> Vec<(Rational, Vec<U::Point>, Vec<U::Point>)> {
    let mut gammas = u.breakpoints();
    gammas.extend(v.breakpoints());
    gammas.sort();
    gammas.dedup();
    gammas
        .into_iter()
        .map(|g| {
            let a = u.level_set(&g).points().iter().cloned().collect();
            let b = v.level_set(&g).points().iter().cloned().collect();
            (g, a, b)
        })
        .collect()
}

pub(crate) fn set_hausdorff<U: Universe>(universe: &U, a: &[U::Point], b: &[U::Point]) -> U::Scalar {
    let ra: Vec<&U::Point> = a.iter().collect();
    let rb: Vec<&U::Point> = b.iter().collect();
    let d = |x: &U::Point, y: &U::Point| universe.metric(x, y);
    directed_by(ra.iter().copied(), &rb, d).max_of(&directed_by(rb.iter().copied(), &ra, d))
}

impl<U: Universe> FuzzyMetric<U> for SupMetric {
    fn kind(&self) -> MetricKind {
        MetricKind::Sup
    }

    fn distance(&self, u: &StepFuzzySet<U>, v: &StepFuzzySet<U>) -> Result<U::Scalar> {
        check_same(u, v)?;
        let universe = u.universe().as_ref();
        let mut worst = U::Scalar::nought();
        for (_, a, b) in merged_level_pairs(u, v) {
            worst = worst.max_of(&set_hausdorff(universe, &a, &b));
        }
        Ok(worst)
    }
}

impl<U: Universe> FuzzyMetric<U> for SkorokhodMetric {
    fn kind(&self) -> MetricKind {
        MetricKind::Skorokhod
    }

    fn distance(&self, u: &StepFuzzySet<U>, v: &StepFuzzySet<U>) -> Result<U::Scalar> {
        check_same(u, v)?;
        Ok(skorokhod::skorokhod(u, v))
    }
}

/// For every graded point `x` of `from`, `min_y max(d(x,y), (u(x) - v(y))^+)` over the support of `to`.
fn graph_gaps<U: Universe>(universe: &U, from: &[(&U::Point, U::Scalar)], to: &[(&U::Point, U::Scalar)]) -> Vec<U::Scalar> {
    from.iter()
        .map(|(x, ux)| {
            let mut best: Option<U::Scalar> = None;
            for (y, vy) in to {
                let gap = universe.metric(x, y).max_of(&ux.pos_part_minus(vy));
                best = Some(match best {
                    Some(b) if b.le_tol(&gap) => b,
                    _ => gap,
                });
            }
            best.expect("support is non-empty")
        })
        .collect()
}

fn max_all<S: Scalar>(values: impl Iterator<Item = S>) -> S {
    values.fold(S::nought(), |m, v| m.max_of(&v))
}

pub fn sendograph_directed<U: Universe>(u: &StepFuzzySet<U>, v: &StepFuzzySet<U>) -> U::Scalar {
    let gu = u.graded_points();
    let gv = v.graded_points();
    max_all(graph_gaps(u.universe().as_ref(), &gu, &gv).into_iter())
}

pub fn endograph_directed<U: Universe>(u: &StepFuzzySet<U>, v: &StepFuzzySet<U>) -> U::Scalar {
    let gu = u.graded_points();
    let gv = v.graded_points();
    let gaps = graph_gaps(u.universe().as_ref(), &gu, &gv);
    max_all(gu.iter().zip(gaps).map(|((_, ux), g)| g.min_of(ux)))
}

impl<U: Universe> FuzzyMetric<U> for SendographMetric {
    fn kind(&self) -> MetricKind {
        MetricKind::Sendograph
    }

    fn distance(&self, u: &StepFuzzySet<U>, v: &StepFuzzySet<U>) -> Result<U::Scalar> {
        check_same(u, v)?;
        Ok(sendograph_directed(u, v).max_of(&sendograph_directed(v, u)))
    }
}

impl<U: Universe> FuzzyMetric<U> for EndographMetric {
    fn kind(&self) -> MetricKind {
        MetricKind::Endograph
    }

    fn distance(&self, u: &StepFuzzySet<U>, v: &StepFuzzySet<U>) -> Result<U::Scalar> {
        check_same(u, v)?;
        Ok(endograph_directed(u, v).max_of(&endograph_directed(v, u)))
    }
}

/// Metrics registered by name for runtime selection.
pub struct MetricRegistry<U: Universe> {
    metrics: Vec<Box<dyn FuzzyMetric<U>>>,
}

impl<U: Universe> Default for MetricRegistry<U> {
    fn default() -> Self {
        Self::standard()
    }
}

impl<U: Universe> MetricRegistry<U> {
    pub fn empty() -> Self {
        MetricRegistry { metrics: Vec::new() }
    }

    pub fn standard() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(SupMetric));
        reg.register(Box::new(SkorokhodMetric));
        reg.register(Box::new(SendographMetric));
        reg.register(Box::new(EndographMetric));
        reg
    }

    /// A later registration under the same name replaces the earlier one.
    pub fn register(&mut self, metric: Box<dyn FuzzyMetric<U>>) {
        self.metrics.retain(|m| m.name() != metric.name());
        self.metrics.push(metric);
    }

    pub fn find(&self, name: &str) -> Option<&dyn FuzzyMetric<U>> {
        self.metrics.iter().find(|m| m.name() == name).map(|m| m.as_ref())
    }

    pub fn get(&self, kind: MetricKind) -> &dyn FuzzyMetric<U> {
        self.find(kind.name())
            .unwrap_or_else(|| panic!("metric {kind} not registered"))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.metrics.iter().map(|m| m.name()).collect()
    }
}

pub fn fuzzy_distance<U: Universe>(
    kind: MetricKind,
    u: &StepFuzzySet<U>,
    v: &StepFuzzySet<U>,
) -> Result<U::Scalar> {
    match kind {
        MetricKind::Sup => SupMetric.distance(u, v),
        MetricKind::Skorokhod => SkorokhodMetric.distance(u, v),
        MetricKind::Sendograph => SendographMetric.distance(u, v),
        MetricKind::Endograph => EndographMetric.distance(u, v),
    }
}
