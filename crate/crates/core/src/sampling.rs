//! Seeded generators for random universes, compact sets and step fuzzy sets.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fuzzy::StepFuzzySet;
use crate::hyper::CompactSet;
use crate::scalar::{int, rat, Rational};
use crate::spaces::finite::FiniteUniverse;
use crate::spaces::Universe;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `index` derived from `seed`.
pub fn substream(seed: u64, index: u64) -> SeededRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

/// `p/q` with `|p| ≤ max_num` and `1 ≤ q ≤ max_den`.
pub fn small_rational(rng: &mut impl Rng, max_num: i64, max_den: i64) -> Rational {
    rat(rng.gen_range(-max_num..=max_num), rng.gen_range(1..=max_den))
}

/// `k` distinct levels in `(0,1)` with denominators at most `max_den`, ascending.
pub fn open_levels(rng: &mut impl Rng, k: usize, max_den: i64) -> Vec<Rational> {
    let mut pool: Vec<Rational> = (2..=max_den)
        .flat_map(|q| (1..q).map(move |p| rat(p, q)))
        .collect();
    pool.sort();
    pool.dedup();
    pool.shuffle(rng);
    let mut out: Vec<Rational> = pool.into_iter().take(k).collect();
    out.sort();
    out
}

/// Between 2 and `max_points` distinct plane points with small rational
/// coordinates under the taxicab metric.
pub fn plane_universe(rng: &mut impl Rng, max_points: usize, name: &str) -> FiniteUniverse<Rational> {
    let n = rng.gen_range(2..=max_points.max(2));
    let mut coords: Vec<(Rational, Rational)> = Vec::with_capacity(n);
    while coords.len() < n {
        let c = (small_rational(rng, 6, 3), small_rational(rng, 6, 3));
        if !coords.contains(&c) {
            coords.push(c);
        }
    }
    FiniteUniverse::in_plane(name, &coords).expect("distinct points give a metric")
}

/// A random subset of `pool` of size `1..=max_size`.
pub fn compact_from<U: Universe>(
    rng: &mut impl Rng,
    universe: &Arc<U>,
    pool: &[U::Point],
    max_size: usize,
) -> CompactSet<U> {
    let k = rng.gen_range(1..=max_size.clamp(1, pool.len()));
    let pts: Vec<U::Point> = pool.choose_multiple(rng, k).cloned().collect();
    CompactSet::new(Arc::clone(universe), pts).expect("pool points belong to the universe")
}

/// A normal step fuzzy set supported on at most `max_support` points of `pool`
/// with at most `max_levels` distinct levels (the top one being 1).
pub fn fuzzy_from<U: Universe>(
    rng: &mut impl Rng,
    universe: &Arc<U>,
    pool: &[U::Point],
    max_support: usize,
    max_levels: usize,
) -> StepFuzzySet<U> {
    let support: Vec<U::Point> = {
        let k = rng.gen_range(1..=max_support.clamp(1, pool.len()));
        pool.choose_multiple(rng, k).cloned().collect()
    };
    let extra = rng.gen_range(0..max_levels.max(1));
    let mut levels = open_levels(rng, extra, 12);
    levels.push(int(1));
    let mut membership: BTreeMap<U::Point, Rational> = BTreeMap::new();
    for (i, p) in support.iter().enumerate() {
        let a = if i == 0 { int(1) } else { levels.choose(rng).cloned().expect("non-empty") };
        membership.insert(p.clone(), a);
    }
    StepFuzzySet::new(Arc::clone(universe), membership).expect("normal by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::validate_metric;

    #[test]
    fn same_seed_same_draws() {
        let a: Vec<u32> = (0..5).map(|_| rng(7).gen()).collect();
        let mut r = rng(7);
        let first: u32 = r.gen();
        assert_eq!(a[0], first);
        let mut s0 = substream(7, 0);
        let mut s1 = substream(7, 1);
        assert_ne!(s0.gen::<u64>(), s1.gen::<u64>());
    }

    #[test]
    fn plane_universes_are_metric() {
        let mut r = rng(3);
        for _ in 0..20 {
            let u = plane_universe(&mut r, 8, "p");
            let pts: Vec<usize> = u.points().collect();
            assert!(validate_metric(&u, &pts).pass());
        }
    }

    #[test]
    fn fuzzy_sets_are_normal_and_bounded() {
        let mut r = rng(11);
        let u = Arc::new(plane_universe(&mut r, 10, "p"));
        let pool: Vec<usize> = u.points().collect();
        for _ in 0..50 {
            let f = fuzzy_from(&mut r, &u, &pool, 6, 5);
            assert!(f.membership().len() <= 6);
            assert!(f.breakpoints().len() <= 5);
            assert_eq!(f.breakpoints().last(), Some(&int(1)));
        }
        let lv = open_levels(&mut r, 4, 12);
        assert_eq!(lv.len(), 4);
        assert!(lv.windows(2).all(|w| w[0] < w[1]));
    }
}
