//! Orbit distance traces at the base, hyperspace and fuzzy levels, and the
//! finite-horizon statistics built on them.

pub mod bridge;
pub mod classify;
pub mod density;
pub mod io;
pub mod matrix;
pub mod profile;
pub mod transfer;

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::fuzzy::{fuzzy_distance, zadeh_apply, MetricKind, StepFuzzySet};
use crate::hyper::{hausdorff, hyper_apply, CompactSet};
use crate::spaces::{distance, System, Universe};

pub use bridge::{bridge_check, BridgeReport};
pub use classify::{classify_pair, ClassifierConfig, Flag, FlagStatus, PairVerdict};
pub use density::{checkpoint_schedule, density_estimate, DensityReport};
pub use matrix::{scrambled_matrix, ScrambledMatrix};
pub use profile::{default_grid, distributional_profile, DistributionalProfile, ProfileBuilder};
pub use transfer::{canonical_embeddings, transfer_check, u_alpha_family, xi_map, TransferReport, XiMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Base,
    Hyper,
    Fuzzy(MetricKind),
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Base => f.write_str("base"),
            Level::Hyper => f.write_str("hyper"),
            Level::Fuzzy(m) => write!(f, "fuzzy:{m}"),
        }
    }
}

impl FromStr for Level {
    type Err = Error;

    /// Accepts `base`, `hyper`, `fuzzy:<metric>` or a bare metric name.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "base" => Ok(Level::Base),
            "hyper" => Ok(Level::Hyper),
            _ => {
                let m = s.strip_prefix("fuzzy:").unwrap_or(s);
                m.parse().map(Level::Fuzzy).map_err(|_| Error::Config(format!("unknown level {s:?}")))
            }
        }
    }
}

impl Serialize for Level {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A state at one of the three levels.
pub enum Element<U: Universe> {
    Point(U::Point),
    Set(CompactSet<U>),
    Fuzzy(StepFuzzySet<U>),
}

impl<U: Universe> Clone for Element<U> {
    fn clone(&self) -> Self {
        match self {
            Element::Point(p) => Element::Point(p.clone()),
            Element::Set(k) => Element::Set(k.clone()),
            Element::Fuzzy(u) => Element::Fuzzy(u.clone()),
        }
    }
}

impl<U: Universe> PartialEq for Element<U> {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Element::Point(p), Element::Point(q)) => p == q,
            (Element::Set(k), Element::Set(l)) => k == l,
            (Element::Fuzzy(u), Element::Fuzzy(v)) => u == v,
            _ => false,
        }
    }
}

impl<U: Universe> fmt::Debug for Element<U> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Point(p) => write!(f, "Point({p:?})"),
            Element::Set(k) => write!(f, "Set({k:?})"),
            Element::Fuzzy(u) => write!(f, "Fuzzy({u:?})"),
        }
    }
}

impl<U: Universe> Element<U> {
    pub fn fits(&self, level: Level) -> bool {
        matches!(
            (self, level),
            (Element::Point(_), Level::Base) | (Element::Set(_), Level::Hyper) | (Element::Fuzzy(_), Level::Fuzzy(_))
        )
    }

    /// One application of `f`, `f̄` or `f̂`.
    pub fn step(&self, system: &System<U>) -> Self {
        match self {
            Element::Point(p) => Element::Point(system.apply(p)),
            Element::Set(k) => Element::Set(hyper_apply(system, k)),
            Element::Fuzzy(u) => Element::Fuzzy(zadeh_apply(system, u)),
        }
    }

    pub fn describe(&self, universe: &U) -> String {
        match self {
            Element::Point(p) => universe.format_point(p),
            Element::Set(k) => k.display(),
            Element::Fuzzy(u) => {
                let parts: Vec<String> = u
                    .membership()
                    .iter()
                    .map(|(p, a)| format!("{}:{a}", universe.format_point(p)))
                    .collect();
                format!("{{{}}}", parts.join(","))
            }
        }
    }
}

/// Distance between two elements with the metric of `level`.
pub fn element_distance<U: Universe>(
    level: Level,
    universe: &U,
    a: &Element<U>,
    b: &Element<U>,
) -> Result<U::Scalar> {
    match (level, a, b) {
        (Level::Base, Element::Point(p), Element::Point(q)) => distance(universe, p, q),
        (Level::Hyper, Element::Set(k), Element::Set(l)) => hausdorff(k, l),
        (Level::Fuzzy(m), Element::Fuzzy(u), Element::Fuzzy(v)) => fuzzy_distance(m, u, v),
        _ => domain(format!("elements do not match level {level}")),
    }
}

/// `d_j = dist(F^j a, F^j b)` for `j = 1..=horizon`.
#[derive(Debug, Clone)]
pub struct DistanceTrace<S> {
    pub level: Level,
    pub left: String,
    pub right: String,
    pub values: Vec<S>,
}

impl<S> DistanceTrace<S> {
    pub fn horizon(&self) -> usize {
        self.values.len()
    }

    /// `d_j` with the 1-based index used throughout.
    pub fn at(&self, j: usize) -> &S {
        &self.values[j - 1]
    }
}

/// Streams `(j, d_j)` for `j = 1..=horizon` into `sink`.
pub fn for_each_distance<U: Universe>(
    level: Level,
    system: &System<U>,
    a: &Element<U>,
    b: &Element<U>,
    horizon: usize,
    mut sink: impl FnMut(usize, U::Scalar),
) -> Result<()> {
    if !a.fits(level) || !b.fits(level) {
        return domain(format!("elements do not match level {level}"));
    }
    let universe = system.universe().as_ref();
    let (mut x, mut y) = (a.clone(), b.clone());
    for j in 1..=horizon {
        x = x.step(system);
        y = y.step(system);
        sink(j, element_distance(level, universe, &x, &y)?);
    }
    Ok(())
}

pub fn distance_trace<U: Universe>(
    level: Level,
    system: &System<U>,
    a: &Element<U>,
    b: &Element<U>,
    horizon: usize,
) -> Result<DistanceTrace<U::Scalar>> {
    if horizon == 0 {
        return domain("horizon must be at least 1");
    }
    let mut values = Vec::with_capacity(horizon);
    for_each_distance(level, system, a, b, horizon, |_, d| values.push(d))?;
    let universe = system.universe().as_ref();
    Ok(DistanceTrace {
        level,
        left: a.describe(universe),
        right: b.describe(universe),
        values,
    })
}
