//! Candidate generators: deterministic lists of elements near a center.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::chaos::{element_distance, Element, Level};
use crate::error::{domain, Result};
use crate::fuzzy::StepFuzzySet;
use crate::hyper::CompactSet;
use crate::scalar::{rat, Rational, Scalar};
use crate::spaces::finite::FiniteUniverse;
use crate::spaces::sequence::{SequenceUniverse, ShiftVector};
use crate::spaces::Universe;

/// Produces candidates strictly within `delta` of `center`, in a fixed order.
pub trait CandidateGenerator<U: Universe>: Send + Sync {
    fn name(&self) -> &str;
    fn candidates(&self, universe: &Arc<U>, level: Level, center: &Element<U>, delta: &Rational) -> Result<Vec<Element<U>>>;
}

fn keep_within<U: Universe>(
    universe: &U,
    level: Level,
    center: &Element<U>,
    delta: &Rational,
    cands: Vec<Element<U>>,
) -> Result<Vec<Element<U>>> {
    let d = U::Scalar::from_rational(delta);
    let mut out = Vec::new();
    for c in cands {
        if c != *center && !out.contains(&c) && element_distance(level, universe, center, &c)?.lt_tol(&d) {
            out.push(c);
        }
    }
    Ok(out)
}

/// Translates the center by `(δ/2)·e_n` for `n = 0..=max_index`.
pub struct BasisPerturbation {
    pub max_index: usize,
}

impl CandidateGenerator<SequenceUniverse> for BasisPerturbation {
    fn name(&self) -> &str {
        "basis"
    }

    fn candidates(
        &self,
        _universe: &Arc<SequenceUniverse>,
        _level: Level,
        center: &Element<SequenceUniverse>,
        delta: &Rational,
    ) -> Result<Vec<Element<SequenceUniverse>>> {
        let half = delta / Rational::from_integer(2.into());
        Ok((0..=self.max_index)
            .map(|n| {
                let step = ShiftVector::unit(n).scaled(&half);
                match center {
                    Element::Point(p) => Element::Point(p.plus(&step)),
                    Element::Set(k) => Element::Set(
                        CompactSet::new(Arc::clone(k.universe()), k.points().iter().map(|p| p.plus(&step)))
                            .expect("translates stay in the universe"),
                    ),
                    Element::Fuzzy(u) => Element::Fuzzy(u.renamed(|p| p.plus(&step))),
                }
            })
            .collect())
    }
}

type Moves<P> = dyn Fn(&P) -> Vec<P> + Send + Sync;

/// Moves one point at a time: a point to each of its moves, a set by
/// replacing or adding one moved point, a fuzzy set by relocating one point.
/// Candidates not strictly inside the δ-ball are dropped.
pub struct PointMoves<U: Universe> {
    name: String,
    moves: Box<Moves<U::Point>>,
}

impl<U: Universe> PointMoves<U> {
    pub fn new(name: impl Into<String>, moves: impl Fn(&U::Point) -> Vec<U::Point> + Send + Sync + 'static) -> Self {
        PointMoves {
            name: name.into(),
            moves: Box::new(moves),
        }
    }
}

impl<U: Universe> CandidateGenerator<U> for PointMoves<U> {
    fn name(&self) -> &str {
        &self.name
    }

    fn candidates(&self, universe: &Arc<U>, level: Level, center: &Element<U>, delta: &Rational) -> Result<Vec<Element<U>>> {
        let mut out = Vec::new();
        match center {
            Element::Point(p) => out.extend((self.moves)(p).into_iter().map(Element::Point)),
            Element::Set(k) => {
                for p in k.points() {
                    for q in (self.moves)(p) {
                        let rest = k.points().iter().filter(|x| *x != p).cloned();
                        out.push(Element::Set(CompactSet::new(Arc::clone(universe), rest.chain([q.clone()]))?));
                        out.push(Element::Set(CompactSet::new(Arc::clone(universe), k.points().iter().cloned().chain([q]))?));
                    }
                }
            }
            Element::Fuzzy(u) => {
                for p in u.membership().keys() {
                    for q in (self.moves)(p) {
                        out.push(Element::Fuzzy(u.renamed(|x| if x == p { q.clone() } else { x.clone() })));
                    }
                }
            }
        }
        out.retain(|c| c.fits(level));
        keep_within(universe.as_ref(), level, center, delta, out)
    }
}

/// Every other point of a finite universe.
pub fn grid_perturbation<S: Scalar>(universe: &FiniteUniverse<S>) -> PointMoves<FiniteUniverse<S>> {
    let n = universe.len();
    PointMoves::new("grid", move |p: &usize| (0..n).filter(|q| q != p).collect())
}

/// `(n, b) ↦ (n, 1 - b)`.
pub fn binary_flip() -> PointMoves<crate::gallery::Example1Universe> {
    PointMoves::new("flip", |p: &(u64, u8)| vec![(p.0, 1 - p.1)])
}

/// `(n, t) ↦ (n, s)` for every other `s` in `steps`.
pub fn second_coordinate_moves<U>(steps: Vec<Rational>) -> PointMoves<U>
where
    U: Universe<Point = (u64, Rational)>,
{
    PointMoves::new("flip", move |p: &(u64, Rational)| {
        steps.iter().filter(|s| **s != p.1).map(|s| (p.0, s.clone())).collect()
    })
}

/// Raises or lowers one grade by `δ/2` (within `(0,1]`, keeping a grade-1 point).
pub struct LevelNudge;

impl<U: Universe> CandidateGenerator<U> for LevelNudge {
    fn name(&self) -> &str {
        "level"
    }

    fn candidates(&self, universe: &Arc<U>, level: Level, center: &Element<U>, delta: &Rational) -> Result<Vec<Element<U>>> {
        let Element::Fuzzy(u) = center else {
            return domain("level nudges need a fuzzy center");
        };
        let eta = delta / Rational::from_integer(2.into());
        let mut out = Vec::new();
        for (p, a) in u.membership() {
            for b in [a - &eta, a + &eta] {
                let b = if b > Rational::one() { Rational::one() } else { b };
                if b <= Rational::zero() || b == *a {
                    continue;
                }
                let mut m = u.membership().clone();
                m.insert(p.clone(), b);
                if let Ok(v) = StepFuzzySet::new(Arc::clone(universe), m) {
                    out.push(Element::Fuzzy(v));
                }
            }
        }
        keep_within(universe.as_ref(), level, center, delta, out)
    }
}

/// Generators registered by name.
pub struct GeneratorRegistry<U: Universe> {
    items: Vec<Box<dyn CandidateGenerator<U>>>,
}

impl<U: Universe> Default for GeneratorRegistry<U> {
    fn default() -> Self {
        GeneratorRegistry { items: Vec::new() }
    }
}

impl<U: Universe> GeneratorRegistry<U> {
    /// Replaces any generator with the same name.
    pub fn register(&mut self, g: Box<dyn CandidateGenerator<U>>) {
        self.items.retain(|x| x.name() != g.name());
        self.items.push(g);
    }

    pub fn find(&self, name: &str) -> Option<&dyn CandidateGenerator<U>> {
        self.items.iter().find(|g| g.name() == name).map(|g| g.as_ref())
    }

    pub fn names(&self) -> Vec<&str> {
        self.items.iter().map(|g| g.name()).collect()
    }
}

impl GeneratorRegistry<SequenceUniverse> {
    pub fn for_sequences(max_index: usize) -> Self {
        let mut r = Self::default();
        r.register(Box::new(BasisPerturbation { max_index }));
        r.register(Box::new(LevelNudge));
        r
    }
}

impl<S: Scalar> GeneratorRegistry<FiniteUniverse<S>> {
    pub fn for_finite(universe: &FiniteUniverse<S>) -> Self {
        let mut r = Self::default();
        r.register(Box::new(grid_perturbation(universe)));
        r.register(Box::new(LevelNudge));
        r
    }
}

/// Second coordinates `0, 1/4, …, 1` as flip targets on the rational pair universes.
pub fn pair_steps() -> Vec<Rational> {
    (0..=4).map(|i| rat(i, 4)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn basis_candidates_are_half_delta_away() {
        let u = Arc::new(SequenceUniverse);
        let g = BasisPerturbation { max_index: 3 };
        let c = g
            .candidates(&u, Level::Base, &Element::Point(ShiftVector::zero()), &rat(1, 5))
            .unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(c[2], Element::Point(ShiftVector::unit(2).scaled(&rat(1, 10))));
    }

    #[test]
    fn moves_are_filtered_by_the_ball() {
        let u = Arc::new(FiniteUniverse::on_line("l", &[int(0), int(1), int(5)]).unwrap());
        let g = grid_perturbation(&u);
        let c = g.candidates(&u, Level::Base, &Element::Point(0), &rat(3, 2)).unwrap();
        assert_eq!(c, vec![Element::Point(1)]);
        let k = Element::Set(CompactSet::new(u.clone(), [0]).unwrap());
        let c = g.candidates(&u, Level::Hyper, &k, &int(2)).unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn nudges_keep_normality() {
        let u = Arc::new(FiniteUniverse::on_line("l", &[int(0), int(1)]).unwrap());
        let f = StepFuzzySet::from_pairs(u.clone(), [(0, int(1)), (1, rat(1, 2))]).unwrap();
        let lvl = Level::Fuzzy(crate::fuzzy::MetricKind::Endograph);
        let c = LevelNudge.candidates(&u, lvl, &Element::Fuzzy(f), &rat(1, 5)).unwrap();
        // the only grade-1 point stays put
        assert_eq!(c.len(), 2);
        let reg = GeneratorRegistry::for_sequences(4);
        assert_eq!(reg.names(), vec!["basis", "level"]);
    }
}
