use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::scalar::Rational;
use crate::spaces::{System, Universe};

use super::classify::{ClassifierConfig, CriterionRegistry, PairVerdict};
use super::profile::{DistributionalProfile, ProfileBuilder};
use super::{for_each_distance, Element, Level};

#[derive(Debug, Clone, Serialize)]
pub struct PairEntry {
    pub i: usize,
    pub j: usize,
    pub verdict: PairVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScrambledMatrix {
    pub level: Level,
    pub horizon: usize,
    pub labels: Vec<String>,
    pub pairs: Vec<PairEntry>,
    /// Flag name → number of pairs for which it holds.
    pub counts: BTreeMap<String, usize>,
}

impl ScrambledMatrix {
    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    /// Whether the flag holds for every unordered pair.
    pub fn all(&self, flag: &str) -> bool {
        self.counts.get(flag).copied() == Some(self.pairs.len())
    }
}

/// Profiles every unordered pair of `family`, in `(i, j)` order with `i < j`.
pub fn pair_profiles<U: Universe>(
    level: Level,
    system: &System<U>,
    family: &[Element<U>],
    horizon: usize,
    grid: &[Rational],
    checkpoints: &[usize],
) -> Result<Vec<(usize, usize, DistributionalProfile<U::Scalar>)>> {
    if family.len() < 2 {
        return domain("a family needs at least two elements");
    }
    for (i, a) in family.iter().enumerate() {
        if family[..i].contains(a) {
            return domain(format!("element {i} repeats an earlier one"));
        }
    }
    let pairs: Vec<(usize, usize)> = (0..family.len())
        .flat_map(|i| (i + 1..family.len()).map(move |j| (i, j)))
        .collect();
    pairs
        .into_par_iter()
        .map(|(i, j)| {
            let mut b = ProfileBuilder::new(horizon, grid, checkpoints)?;
            for_each_distance(level, system, &family[i], &family[j], horizon, |_, d| b.push(&d))?;
            Ok((i, j, b.finish()?))
        })
        .collect()
}

pub fn scrambled_matrix<U: Universe>(
    level: Level,
    system: &System<U>,
    family: &[Element<U>],
    horizon: usize,
    grid: &[Rational],
    checkpoints: &[usize],
    config: &ClassifierConfig,
) -> Result<ScrambledMatrix> {
    let registry = CriterionRegistry::<U::Scalar>::standard();
    let profiles = pair_profiles(level, system, family, horizon, grid, checkpoints)?;
    let mut counts: BTreeMap<String, usize> = registry.names().into_iter().map(|n| (n.to_string(), 0)).collect();
    let mut pairs = Vec::with_capacity(profiles.len());
    for (i, j, p) in profiles {
        let verdict = registry.classify(&p, config)?;
        for f in verdict.flags.iter().filter(|f| f.holds()) {
            *counts.entry(f.name.clone()).or_default() += 1;
        }
        pairs.push(PairEntry { i, j, verdict });
    }
    let universe = system.universe().as_ref();
    Ok(ScrambledMatrix {
        level,
        horizon,
        labels: family.iter().map(|e| e.describe(universe)).collect(),
        pairs,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::chaos::profile::default_grid;
    use crate::scalar::int;
    use crate::spaces::finite::FiniteUniverse;

    fn system() -> System<FiniteUniverse<Rational>> {
        let u = Arc::new(FiniteUniverse::on_line("l", &[int(0), int(1), int(2)]).unwrap());
        System::new(u, "collapse", |_: &usize| 0)
    }

    #[test]
    fn collapsing_family_is_proximal_only() {
        let sys = system();
        let fam = vec![Element::Point(0), Element::Point(1), Element::Point(2)];
        let m = scrambled_matrix(Level::Base, &sys, &fam, 16, &default_grid(), &[8, 16], &Default::default())
            .unwrap();
        assert_eq!(m.pair_count(), 3);
        assert!(m.all("proximal"));
        assert!(!m.all("ly"));
        assert_eq!(m.counts["ly"], 0);
        assert_eq!((m.pairs[2].i, m.pairs[2].j), (1, 2));
    }

    #[test]
    fn duplicates_and_singletons_are_rejected() {
        let sys = system();
        let g = default_grid();
        let cfg = ClassifierConfig::default();
        assert!(scrambled_matrix(Level::Base, &sys, &[Element::Point(0)], 4, &g, &[4], &cfg).is_err());
        let dup = vec![Element::Point(1), Element::Point(0), Element::Point(1)];
        assert!(scrambled_matrix(Level::Base, &sys, &dup, 4, &g, &[4], &cfg).is_err());
    }
}
