//! Seeded property suites: the metric identities between the four fuzzy
//! metrics and the level-set bounds relating `χ_K` to a nearby fuzzy set.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::hyper::{hausdorff, CompactSet};
use crate::sampling::{compact_from, fuzzy_from, open_levels, plane_universe, substream};
use crate::scalar::{int, rat, Rational};
use crate::spaces::finite::FiniteUniverse;
use crate::spaces::Universe;

use super::{fuzzy_distance, MetricKind, StepFuzzySet};

type Plane = FiniteUniverse<Rational>;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteViolation {
    pub trial: usize,
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub seed: u64,
    pub trials: usize,
    /// Check name → number of times it was evaluated.
    pub checks: BTreeMap<String, usize>,
    pub violations: Vec<SuiteViolation>,
}

impl SuiteReport {
    fn new(name: &str, seed: u64, trials: usize) -> Self {
        SuiteReport {
            name: name.into(),
            seed,
            trials,
            checks: BTreeMap::new(),
            violations: Vec::new(),
        }
    }

    fn check(&mut self, trial: usize, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        *self.checks.entry(name.into()).or_default() += 1;
        if !ok {
            self.violations.push(SuiteViolation {
                trial,
                check: name.into(),
                detail: detail(),
            });
        }
    }

    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn evaluated(&self) -> usize {
        self.checks.values().sum()
    }
}

fn d(m: MetricKind, u: &StepFuzzySet<Plane>, v: &StepFuzzySet<Plane>) -> Rational {
    fuzzy_distance(m, u, v).expect("same universe")
}

fn h(k: &CompactSet<Plane>, l: &CompactSet<Plane>) -> Rational {
    hausdorff(k, l).expect("same universe")
}

struct Draw {
    universe: Arc<Plane>,
    pool: Vec<usize>,
}

fn draw(rng: &mut impl Rng) -> Draw {
    let universe = Arc::new(plane_universe(rng, 20, "plane"));
    let pool: Vec<usize> = universe.points().collect();
    Draw { universe, pool }
}

/// Chain, singleton, indicator and characteristic-function identities, the
/// level lower bounds, and the metric axioms on random triples.
pub fn identity_suite(seed: u64, trials: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("metric-identities", seed, trials);
    for t in 0..trials {
        let mut rng = substream(seed, t as u64);
        let Draw { universe, pool } = draw(&mut rng);
        let u = fuzzy_from(&mut rng, &universe, &pool, 6, 5);
        let v = fuzzy_from(&mut rng, &universe, &pool, 6, 5);
        let w = fuzzy_from(&mut rng, &universe, &pool, 6, 5);
        let k = compact_from(&mut rng, &universe, &pool, 4);
        let l = compact_from(&mut rng, &universe, &pool, 4);
        let x = pool[rng.gen_range(0..pool.len())];

        let [sup, sko, send, endo] = MetricKind::ALL.map(|m| d(m, &u, &v));
        rep.check(t, "chain", endo <= send && send <= sko && sko <= sup && endo <= int(1), || {
            format!("E={endo} S={send} 0={sko} inf={sup}")
        });

        let cx = StepFuzzySet::indicator(&CompactSet::singleton(universe.clone(), x).expect("member"));
        let far = u.support().points().iter().map(|y| universe.metric(&x, y)).max().expect("non-empty");
        for m in [MetricKind::Sup, MetricKind::Skorokhod, MetricKind::Sendograph] {
            let got = d(m, &cx, &u);
            rep.check(t, "singleton", got == far, || format!("{m}: {got} vs {far}"));
        }

        let ck = StepFuzzySet::indicator(&k);
        let want = h(&k, &u.support()).max(h(&k, &u.level_set(&int(1))));
        for m in [MetricKind::Sup, MetricKind::Skorokhod] {
            let got = d(m, &ck, &u);
            rep.check(t, "indicator", got == want, || format!("{m}: {got} vs {want}"));
        }

        let cl = StepFuzzySet::indicator(&l);
        let hkl = h(&k, &l);
        for m in MetricKind::ALL {
            let got = d(m, &ck, &cl);
            let want = if m == MetricKind::Endograph { hkl.clone().min(int(1)) } else { hkl.clone() };
            rep.check(t, "characteristic", got == want, || format!("{m}: {got} vs {want}"));
        }

        let h0 = h(&u.support(), &v.support());
        let h1 = h(&u.level_set(&int(1)), &v.level_set(&int(1)));
        rep.check(t, "support-bound", h0 <= send, || format!("{h0} > S={send}"));
        rep.check(t, "level-bound", h0.clone().max(h1.clone()) <= sko, || format!("max({h0},{h1}) > 0={sko}"));

        for m in MetricKind::ALL {
            let (uv, vu, uw, vw) = (d(m, &u, &v), d(m, &v, &u), d(m, &u, &w), d(m, &v, &w));
            rep.check(t, "identity", d(m, &u, &u) == int(0) && (uv > int(0)) == (u != v), || {
                format!("{m}: d(u,v)={uv} with u==v {}", u == v)
            });
            rep.check(t, "symmetry", uv == vu, || format!("{m}: {uv} vs {vu}"));
            rep.check(t, "triangle", uw <= &uv + &vw, || format!("{m}: {uw} > {uv} + {vw}"));
        }
    }
    rep
}

/// `χ_K ∪ (low-grade extras)`, `χ_K` with one point lowered, or a free draw.
fn near_indicator(rng: &mut impl Rng, dr: &Draw, k: &CompactSet<Plane>) -> StepFuzzySet<Plane> {
    let mut m: BTreeMap<usize, Rational> = k.points().iter().map(|p| (*p, int(1))).collect();
    match rng.gen_range(0..3) {
        0 => {
            for _ in 0..rng.gen_range(1..=3) {
                let p = dr.pool[rng.gen_range(0..dr.pool.len())];
                let g = rat(rng.gen_range(1..=4), 12);
                m.entry(p).or_insert(g);
            }
        }
        1 if k.len() > 1 => {
            let p = *k.points().iter().nth(rng.gen_range(1..k.len())).expect("in range");
            m.insert(p, open_levels(rng, 1, 12).remove(0));
            let q = dr.pool[rng.gen_range(0..dr.pool.len())];
            m.entry(q).or_insert(rat(rng.gen_range(1..=6), 12));
        }
        _ => return fuzzy_from(rng, &dr.universe, &dr.pool, 6, 5),
    }
    StepFuzzySet::new(dr.universe.clone(), m).expect("K keeps grade 1")
}

fn max_over(k: &CompactSet<Plane>, u: &StepFuzzySet<Plane>, levels: &[Rational]) -> Option<Rational> {
    levels.iter().map(|a| h(k, &u.level_set(a))).max()
}

/// The upper bounds on `d_H(K, u_α)` from a small endograph or sendograph
/// distance, and the existence of a far level from a large one.
pub fn level_bounds_suite(seed: u64, trials: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("level-bounds", seed, trials);
    let (zero, one, half) = (int(0), int(1), rat(1, 2));
    for t in 0..trials {
        let mut rng = substream(seed, t as u64);
        let dr = draw(&mut rng);
        let k = compact_from(&mut rng, &dr.universe, &dr.pool, 4);
        let u = near_indicator(&mut rng, &dr, &k);
        let ck = StepFuzzySet::indicator(&k);
        let e = d(MetricKind::Endograph, &ck, &u);
        let s = d(MetricKind::Sendograph, &ck, &u);

        if e < half {
            let lv = u.window_levels(&e, false, &(&one - &e));
            if let Some(worst) = max_over(&k, &u, &lv) {
                rep.check(t, "endograph-near", worst <= e, || format!("d_H={worst} > E={e}"));
            }
        }
        if s < one {
            let lv = u.window_levels(&zero, true, &(&one - &s));
            let worst = max_over(&k, &u, &lv).expect("window contains 0");
            rep.check(t, "sendograph-near", worst <= s, || format!("d_H={worst} > S={s}"));
        }
        let cap = s.clone().min(one.clone());
        for q in 1..4 {
            let eps = &cap * rat(q, 4);
            if eps <= zero {
                continue;
            }
            let lv = u.window_levels(&zero, true, &(&one - &eps));
            let best = max_over(&k, &u, &lv).expect("window contains 0");
            rep.check(t, "sendograph-far", best > eps, || format!("max d_H={best} ≤ ε={eps} (S={s})"));
        }
        let cap = e.clone().min(half.clone());
        for q in 1..4 {
            let eps = &cap * rat(q, 4);
            if eps <= zero {
                continue;
            }
            let lv = u.window_levels(&eps, false, &(&one - &eps));
            let best = max_over(&k, &u, &lv).unwrap_or_default();
            rep.check(t, "endograph-far", best > eps, || format!("max d_H={best} ≤ ε={eps} (E={e})"));
        }
    }
    rep
}
