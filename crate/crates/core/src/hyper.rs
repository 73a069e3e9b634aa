//! Finite compact sets, the Hausdorff metric and the induced map on sets.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Result};
use crate::scalar::Scalar;
use crate::spaces::{System, Universe};

pub(crate) fn same_universe<U: Universe>(a: &Arc<U>, b: &Arc<U>) -> bool {
    Arc::ptr_eq(a, b) || a.id() == b.id()
}

/// Non-empty finite set of points of one universe.
pub struct CompactSet<U: Universe> {
    universe: Arc<U>,
    points: BTreeSet<U::Point>,
}

impl<U: Universe> Clone for CompactSet<U> {
    fn clone(&self) -> Self {
        CompactSet {
            universe: Arc::clone(&self.universe),
            points: self.points.clone(),
        }
    }
}

impl<U: Universe> PartialEq for CompactSet<U> {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points && same_universe(&self.universe, &other.universe)
    }
}

impl<U: Universe> fmt::Debug for CompactSet<U> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.points.iter().map(|p| self.universe.format_point(p)))
            .finish()
    }
}

impl<U: Universe> CompactSet<U> {
    pub fn new(universe: Arc<U>, points: impl IntoIterator<Item = U::Point>) -> Result<Self> {
        let points: BTreeSet<U::Point> = points.into_iter().collect();
        if points.is_empty() {
            return domain("compact sets must be non-empty");
        }
        if let Some(p) = points.iter().find(|p| !universe.contains(p)) {
            return domain(format!(
                "point {} not in {}",
                universe.format_point(p),
                universe.id()
            ));
        }
        Ok(CompactSet { universe, points })
    }

    pub fn singleton(universe: Arc<U>, p: U::Point) -> Result<Self> {
        Self::new(universe, [p])
    }

    /// Caller guarantees non-emptiness and membership.
    pub(crate) fn from_trusted(universe: Arc<U>, points: BTreeSet<U::Point>) -> Self {
        debug_assert!(!points.is_empty());
        CompactSet { universe, points }
    }

    pub fn universe(&self) -> &Arc<U> {
        &self.universe
    }

    pub fn points(&self) -> &BTreeSet<U::Point> {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, p: &U::Point) -> bool {
        self.points.contains(p)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.points.is_subset(&other.points)
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        check_same(self, other)?;
        Ok(CompactSet {
            universe: Arc::clone(&self.universe),
            points: self.points.union(&other.points).cloned().collect(),
        })
    }

    pub fn display(&self) -> String {
        let items: Vec<String> = self
            .points
            .iter()
            .map(|p| self.universe.format_point(p))
            .collect();
        format!("{{{}}}", items.join(" "))
    }
}

fn check_same<U: Universe>(a: &CompactSet<U>, b: &CompactSet<U>) -> Result<()> {
    if same_universe(&a.universe, &b.universe) {
        Ok(())
    } else {
        domain(format!(
            "sets live in different universes: {} vs {}",
            a.universe.id(),
            b.universe.id()
        ))
    }
}

/// `max over a of min over b of d(a, b)`; `b` must be non-empty.
pub fn directed_by<'a, P: 'a, S: Scalar>(
    a: impl IntoIterator<Item = &'a P>,
    b: &[&'a P],
    d: impl Fn(&P, &P) -> S,
) -> S {
    let mut worst = S::nought();
    for x in a {
        let mut best: Option<S> = None;
        for y in b {
            let v = d(x, y);
            best = Some(match best {
                Some(m) if m.le_tol(&v) => m,
                _ => v,
            });
            if best.as_ref().is_some_and(|m| *m == S::nought()) {
                break;
            }
        }
        let best = best.expect("directed distance to an empty set");
        if worst.lt_tol(&best) {
            worst = best;
        }
    }
    worst
}

pub fn directed<U: Universe>(k: &CompactSet<U>, l: &CompactSet<U>) -> Result<U::Scalar> {
    check_same(k, l)?;
    let u = &k.universe;
    let target: Vec<&U::Point> = l.points.iter().collect();
    Ok(directed_by(&k.points, &target, |x, y| u.metric(x, y)))
}

pub fn hausdorff<U: Universe>(k: &CompactSet<U>, l: &CompactSet<U>) -> Result<U::Scalar> {
    Ok(directed(k, l)?.max_of(&directed(l, k)?))
}

/// True iff every point of `k` lies within `eps` of some point of `l`.
pub fn within_dilation<U: Universe>(
    k: &CompactSet<U>,
    l: &CompactSet<U>,
    eps: &U::Scalar,
) -> Result<bool> {
    check_same(k, l)?;
    let u = &k.universe;
    Ok(k.points
        .iter()
        .all(|x| l.points.iter().any(|y| u.metric(x, y).le_tol(eps))))
}

pub fn hyper_apply<U: Universe>(system: &System<U>, k: &CompactSet<U>) -> CompactSet<U> {
    CompactSet {
        universe: Arc::clone(&k.universe),
        points: k.points.iter().map(|p| system.apply(p)).collect(),
    }
}

pub fn hyper_iterate<U: Universe>(system: &System<U>, k: &CompactSet<U>, n: usize) -> CompactSet<U> {
    let mut set = k.clone();
    for _ in 0..n {
        set = hyper_apply(system, &set);
    }
    set
}
