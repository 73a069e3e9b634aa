//! Normal step fuzzy sets, their levels, the Zadeh extension and the four metrics.

pub mod cloud;
pub mod metrics;
pub mod skorokhod;
pub mod suite;
pub mod text;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{domain, Error, Result};
use crate::hyper::{same_universe, CompactSet};
use crate::scalar::{is_level, Rational, Scalar};
use crate::spaces::{System, Universe};

pub use metrics::{fuzzy_distance, FuzzyMetric, MetricKind, MetricRegistry};

/// Finite-support fuzzy set with rational levels in (0, 1] and max level 1.
pub struct StepFuzzySet<U: Universe> {
    universe: Arc<U>,
    membership: BTreeMap<U::Point, Rational>,
}

impl<U: Universe> Clone for StepFuzzySet<U> {
    fn clone(&self) -> Self {
        StepFuzzySet {
            universe: Arc::clone(&self.universe),
            membership: self.membership.clone(),
        }
    }
}

impl<U: Universe> PartialEq for StepFuzzySet<U> {
    fn eq(&self, other: &Self) -> bool {
        self.membership == other.membership && same_universe(&self.universe, &other.universe)
    }
}

impl<U: Universe> fmt::Debug for StepFuzzySet<U> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(
                self.membership
                    .iter()
                    .map(|(p, a)| (self.universe.format_point(p), a.to_string())),
            )
            .finish()
    }
}

impl<U: Universe> StepFuzzySet<U> {
    pub fn new(universe: Arc<U>, membership: BTreeMap<U::Point, Rational>) -> Result<Self> {
        for (p, a) in &membership {
            if !universe.contains(p) {
                return domain(format!("point {} not in {}", universe.format_point(p), universe.id()));
            }
            if !is_level(a) {
                return Err(Error::Domain(format!("level {a} outside (0,1]")));
            }
        }
        if !membership.values().any(|a| a.is_one()) {
            return Err(Error::Normality("no point has membership 1".into()));
        }
        Ok(StepFuzzySet { universe, membership })
    }

    pub fn from_pairs(
        universe: Arc<U>,
        pairs: impl IntoIterator<Item = (U::Point, Rational)>,
    ) -> Result<Self> {
        let mut membership = BTreeMap::new();
        for (p, a) in pairs {
            if membership.insert(p.clone(), a).is_some() {
                return domain(format!("point {} listed twice", universe.format_point(&p)));
            }
        }
        Self::new(universe, membership)
    }

    /// The characteristic function of `k`.
    pub fn indicator(k: &CompactSet<U>) -> Self {
        StepFuzzySet {
            universe: Arc::clone(k.universe()),
            membership: k.points().iter().map(|p| (p.clone(), Rational::one())).collect(),
        }
    }

    /// `max_l α_l χ_{K_l}`; requires `0 < α_1 < … < α_N = 1`.
    pub fn from_levels(levels: &[(Rational, CompactSet<U>)]) -> Result<Self> {
        let Some((last, _)) = levels.last() else {
            return Err(Error::Normality("no levels given".into()));
        };
        if !last.is_one() {
            return Err(Error::Normality(format!("top level is {last}, not 1")));
        }
        for w in levels.windows(2) {
            if w[0].0 >= w[1].0 {
                return domain("levels must be strictly increasing");
            }
        }
        if !is_level(&levels[0].0) {
            return domain("levels must be positive");
        }
        let universe = Arc::clone(levels[0].1.universe());
        let mut membership: BTreeMap<U::Point, Rational> = BTreeMap::new();
        for (a, k) in levels {
            if !same_universe(&universe, k.universe()) {
                return domain("level sets live in different universes");
            }
            for p in k.points() {
                let entry = membership.entry(p.clone()).or_insert_with(Rational::zero);
                if *entry < *a {
                    *entry = a.clone();
                }
            }
        }
        Ok(StepFuzzySet { universe, membership })
    }

    pub fn universe(&self) -> &Arc<U> {
        &self.universe
    }

    pub fn membership(&self) -> &BTreeMap<U::Point, Rational> {
        &self.membership
    }

    pub fn grade(&self, p: &U::Point) -> Rational {
        self.membership.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    /// Distinct positive levels in increasing order; the last one is 1.
    pub fn breakpoints(&self) -> Vec<Rational> {
        let set: BTreeSet<&Rational> = self.membership.values().collect();
        set.into_iter().cloned().collect()
    }

    pub fn support(&self) -> CompactSet<U> {
        CompactSet::from_trusted(
            Arc::clone(&self.universe),
            self.membership.keys().cloned().collect(),
        )
    }

    /// `{x : u(x) ≥ α}` for α > 0 and the support for α ≤ 0. `α` is clamped to 1.
    pub fn level_set(&self, alpha: &Rational) -> CompactSet<U> {
        let one = Rational::one();
        let a = if *alpha > one { &one } else { alpha };
        let points: BTreeSet<U::Point> = self
            .membership
            .iter()
            .filter(|(_, v)| *v >= a)
            .map(|(p, _)| p.clone())
            .collect();
        CompactSet::from_trusted(Arc::clone(&self.universe), points)
    }

    /// Level sets `U_i = {u ≥ a_i}` for the breakpoints `a_1 < … < a_N = 1`;
    /// `U_i` is the level set at every γ in `(a_{i-1}, a_i]` (and `U_1` at γ = 0).
    pub fn pieces(&self) -> Vec<(Rational, CompactSet<U>)> {
        self.breakpoints()
            .into_iter()
            .map(|a| {
                let set = self.level_set(&a);
                (a, set)
            })
            .collect()
    }

    /// One level from every interval of constancy of `α ↦ u_α` meeting the
    /// window `(lo, hi]` (or `[lo, hi]` when `lo_closed`). Empty when the window is.
    pub fn window_levels(&self, lo: &Rational, lo_closed: bool, hi: &Rational) -> Vec<Rational> {
        let inside = |a: &Rational| (if lo_closed { a >= lo } else { a > lo }) && a <= hi;
        let mut out: Vec<Rational> = self.breakpoints().into_iter().filter(|a| inside(a)).collect();
        if lo_closed && inside(lo) {
            out.push(lo.clone());
        }
        if inside(hi) {
            out.push(hi.clone());
        }
        out.sort();
        out.dedup();
        out
    }

    /// Membership values converted to the universe scalar, in point order.
    pub(crate) fn graded_points(&self) -> Vec<(&U::Point, U::Scalar)> {
        self.membership
            .iter()
            .map(|(p, a)| (p, U::Scalar::from_rational(a)))
            .collect()
    }

    pub fn renamed(&self, f: impl Fn(&U::Point) -> U::Point) -> Self {
        let mut image: BTreeMap<U::Point, Rational> = BTreeMap::new();
        for (p, a) in &self.membership {
            let q = f(p);
            match image.get_mut(&q) {
                Some(b) if *b >= *a => {}
                Some(b) => *b = a.clone(),
                None => {
                    image.insert(q, a.clone());
                }
            }
        }
        StepFuzzySet {
            universe: Arc::clone(&self.universe),
            membership: image,
        }
    }
}

/// Breakpoints `0 = α_0 < α_1 < … < α_N = 1` with the constant level set on each `(α_{l-1}, α_l]`.
pub struct LevelDecomposition<U: Universe> {
    pub breakpoints: Vec<Rational>,
    pub level_sets: Vec<CompactSet<U>>,
}

impl<U: Universe> LevelDecomposition<U> {
    pub fn reconstruct(&self) -> Result<StepFuzzySet<U>> {
        let levels: Vec<(Rational, CompactSet<U>)> = self.breakpoints[1..]
            .iter()
            .cloned()
            .zip(self.level_sets.iter().cloned())
            .collect();
        StepFuzzySet::from_levels(&levels)
    }
}

/// Exact jump levels of a step fuzzy set; each interval carries a single level set.
pub fn discretize_levels<U: Universe>(
    u: &StepFuzzySet<U>,
    eps: &U::Scalar,
) -> Result<LevelDecomposition<U>> {
    if !U::Scalar::nought().lt_tol(eps) {
        return domain("ε must be positive");
    }
    let pieces = u.pieces();
    let mut breakpoints = vec![Rational::zero()];
    let mut level_sets = Vec::with_capacity(pieces.len());
    for (a, set) in pieces {
        breakpoints.push(a);
        level_sets.push(set);
    }
    Ok(LevelDecomposition {
        breakpoints,
        level_sets,
    })
}

/// Zadeh extension: `f̂(u)(x') = max{u(y) : f(y) = x'}`.
pub fn zadeh_apply<U: Universe>(system: &System<U>, u: &StepFuzzySet<U>) -> StepFuzzySet<U> {
    u.renamed(|p| system.apply(p))
}

pub fn zadeh_iterate<U: Universe>(system: &System<U>, u: &StepFuzzySet<U>, n: usize) -> StepFuzzySet<U> {
    let mut w = u.clone();
    for _ in 0..n {
        w = zadeh_apply(system, &w);
    }
    w
}

pub(crate) fn check_same<U: Universe>(u: &StepFuzzySet<U>, v: &StepFuzzySet<U>) -> Result<()> {
    if same_universe(&u.universe, &v.universe) {
        Ok(())
    } else {
        domain(format!(
            "fuzzy sets live in different universes: {} vs {}",
            u.universe.id(),
            v.universe.id()
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyper::hyper_apply;
    use crate::scalar::{int, rat};
    use crate::spaces::finite::FiniteUniverse;

    fn line() -> Arc<FiniteUniverse<Rational>> {
        let c: Vec<Rational> = (0..6).map(int).collect();
        Arc::new(FiniteUniverse::on_line("line", &c).unwrap())
    }

    fn set(u: &Arc<FiniteUniverse<Rational>>, pts: &[usize]) -> CompactSet<FiniteUniverse<Rational>> {
        CompactSet::new(u.clone(), pts.iter().copied()).unwrap()
    }

    #[test]
    fn single_level_is_indicator() {
        let u = line();
        let k = set(&u, &[1, 2]);
        let w = StepFuzzySet::from_levels(&[(int(1), k.clone())]).unwrap();
        assert_eq!(w, StepFuzzySet::indicator(&k));
    }

    #[test]
    fn overlapping_levels_take_max() {
        let u = line();
        let w = StepFuzzySet::from_levels(&[
            (rat(1, 4), set(&u, &[0, 1])),
            (rat(1, 2), set(&u, &[1, 2])),
            (int(1), set(&u, &[3])),
        ])
        .unwrap();
        assert_eq!(w.grade(&0), rat(1, 4));
        assert_eq!(w.grade(&1), rat(1, 2));
        assert_eq!(w.grade(&3), int(1));
        assert_eq!(w.grade(&5), int(0));
    }

    #[test]
    fn normality_is_enforced() {
        let u = line();
        let err = StepFuzzySet::from_levels(&[(rat(1, 2), set(&u, &[0]))]).unwrap_err();
        assert!(matches!(err, Error::Normality(_)));
        let err = StepFuzzySet::from_pairs(u.clone(), [(0, rat(1, 2))]).unwrap_err();
        assert!(matches!(err, Error::Normality(_)));
        assert!(StepFuzzySet::from_pairs(u, [(0, int(1)), (1, int(0))]).is_err());
    }

    #[test]
    fn u_alpha_level_structure() {
        let u = line();
        let k = set(&u, &[0]);
        let l = set(&u, &[0, 4]);
        let w = StepFuzzySet::from_levels(&[(rat(1, 3), l.clone()), (int(1), k.clone())]).unwrap();
        assert_eq!(w.level_set(&int(0)), l);
        assert_eq!(w.level_set(&rat(1, 3)), l);
        assert_eq!(w.level_set(&rat(1, 2)), k);
        assert_eq!(w.level_set(&int(1)), k);
        let dec = discretize_levels(&w, &rat(1, 10)).unwrap();
        assert_eq!(dec.breakpoints, vec![int(0), rat(1, 3), int(1)]);
        assert_eq!(dec.reconstruct().unwrap(), w);
    }

    #[test]
    fn discretize_three_levels() {
        let u = line();
        let w = StepFuzzySet::from_pairs(u, [(0, rat(1, 4)), (1, rat(1, 2)), (2, int(1))]).unwrap();
        let dec = discretize_levels(&w, &rat(1, 100)).unwrap();
        assert_eq!(dec.breakpoints, vec![int(0), rat(1, 4), rat(1, 2), int(1)]);
        assert!(discretize_levels(&w, &int(0)).is_err());
    }

    #[test]
    fn zadeh_takes_max_over_preimage() {
        let u = line();
        let sys = System::new(u.clone(), "collapse", |p: &usize| if *p < 2 { 5 } else { *p });
        let w = StepFuzzySet::from_pairs(u, [(0, rat(1, 2)), (1, int(1)), (3, rat(1, 3))]).unwrap();
        let image = zadeh_apply(&sys, &w);
        assert_eq!(image.grade(&5), int(1));
        assert_eq!(image.grade(&3), rat(1, 3));
        for a in [int(0), rat(1, 3), rat(1, 2), int(1)] {
            assert_eq!(image.level_set(&a), hyper_apply(&sys, &w.level_set(&a)));
        }
    }
}
