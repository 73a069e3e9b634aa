use std::sync::Arc;

use fuzzdyn::chaos::{
    bridge_check, classify_pair, default_grid, distributional_profile, ClassifierConfig, DistanceTrace, Level,
};
use fuzzdyn::fuzzy::cloud::{cloud_distance, Graph};
use fuzzdyn::fuzzy::suite::{identity_suite, level_bounds_suite};
use fuzzdyn::fuzzy::{zadeh_apply, zadeh_iterate};
use fuzzdyn::hyper::{hyper_apply, hyper_iterate};
use fuzzdyn::proxsens::lift_proximal_tuple;
use fuzzdyn::sampling::{compact_from, fuzzy_from, open_levels, plane_universe, substream};
use fuzzdyn::scalar::{int, rat};
use fuzzdyn::spaces::finite::FiniteUniverse;
use fuzzdyn::{fuzzy_distance, hausdorff, CompactSet, MetricKind, Rational, Scalar, StepFuzzySet, System};
use rand::Rng;

type Plane = FiniteUniverse<Rational>;

struct Draw {
    universe: Arc<Plane>,
    pool: Vec<usize>,
    system: System<Plane>,
}

fn draw(t: u64, r: &mut impl Rng) -> Draw {
    let universe = Arc::new(plane_universe(r, 12, "p"));
    let pool: Vec<usize> = universe.points().collect();
    let n = pool.len();
    let table: Vec<usize> = (0..n).map(|_| r.gen_range(0..n)).collect();
    let system = System::new(Arc::clone(&universe), format!("table-{t}"), move |p: &usize| table[*p]);
    Draw { universe, pool, system }
}

#[test]
fn seeded_suites_pass() {
    let a = identity_suite(7, 400);
    assert!(a.pass(), "{:?}", a.violations.first());
    let b = level_bounds_suite(7, 400);
    assert!(b.pass(), "{:?}", b.violations.first());
}

#[test]
fn characteristic_functions_are_isometric() {
    for t in 0..500 {
        let mut r = substream(10, t);
        let d = draw(t, &mut r);
        let k = compact_from(&mut r, &d.universe, &d.pool, 5);
        let l = compact_from(&mut r, &d.universe, &d.pool, 5);
        let h = hausdorff(&k, &l).unwrap();
        let (ck, cl) = (StepFuzzySet::indicator(&k), StepFuzzySet::indicator(&l));
        for m in [MetricKind::Sup, MetricKind::Skorokhod, MetricKind::Sendograph] {
            assert_eq!(fuzzy_distance(m, &ck, &cl).unwrap(), h, "{m:?} trial {t}");
        }
        let e = fuzzy_distance(MetricKind::Endograph, &ck, &cl).unwrap();
        assert_eq!(e, h.clone().min(int(1)));
    }
}

#[test]
fn fuzzy_metric_axioms() {
    for t in 0..300 {
        let mut r = substream(11, t);
        let d = draw(t, &mut r);
        let u = fuzzy_from(&mut r, &d.universe, &d.pool, 5, 4);
        let v = fuzzy_from(&mut r, &d.universe, &d.pool, 5, 4);
        let w = fuzzy_from(&mut r, &d.universe, &d.pool, 5, 4);
        for m in MetricKind::ALL {
            let uv = fuzzy_distance(m, &u, &v).unwrap();
            assert_eq!(uv, fuzzy_distance(m, &v, &u).unwrap());
            assert_eq!(fuzzy_distance(m, &u, &u).unwrap(), int(0));
            assert_eq!(uv == int(0), u == v, "{m:?} trial {t}");
            assert!(uv <= fuzzy_distance(m, &u, &w).unwrap() + fuzzy_distance(m, &w, &v).unwrap());
        }
        // the sup metric dominates, the endograph metric is dominated
        let sup = fuzzy_distance(MetricKind::Sup, &u, &v).unwrap();
        let send = fuzzy_distance(MetricKind::Sendograph, &u, &v).unwrap();
        let endo = fuzzy_distance(MetricKind::Endograph, &u, &v).unwrap();
        assert!(send <= sup && endo <= send);
        assert!(fuzzy_distance(MetricKind::Skorokhod, &u, &v).unwrap() <= sup);
    }
}

#[test]
fn graph_metrics_agree_with_point_clouds() {
    let res = 48;
    let tol = rat(1, res as i64);
    for t in 0..120 {
        let mut r = substream(12, t);
        let d = draw(t, &mut r);
        let u = fuzzy_from(&mut r, &d.universe, &d.pool, 4, 4);
        let v = fuzzy_from(&mut r, &d.universe, &d.pool, 4, 4);
        for (m, g) in [(MetricKind::Sendograph, Graph::Sendograph), (MetricKind::Endograph, Graph::Endograph)] {
            let exact = fuzzy_distance(m, &u, &v).unwrap();
            let cloud = cloud_distance(&u, &v, g, res);
            let gap = (&exact - &cloud).max(&cloud - &exact);
            assert!(gap <= tol, "{m:?} trial {t}: {exact} vs {cloud}");
        }
    }
}

#[test]
fn zadeh_extension_commutes_with_level_sets() {
    for t in 0..300 {
        let mut r = substream(13, t);
        let d = draw(t, &mut r);
        let u = fuzzy_from(&mut r, &d.universe, &d.pool, 6, 5);
        let n = r.gen_range(1..4);
        let fu = zadeh_iterate(&d.system, &u, n);
        let mut levels = u.breakpoints();
        levels.extend(open_levels(&mut r, 3, 12));
        for a in levels {
            assert_eq!(fu.level_set(&a), hyper_iterate(&d.system, &u.level_set(&a), n), "trial {t} at {a}");
        }
        let k = compact_from(&mut r, &d.universe, &d.pool, 4);
        assert_eq!(zadeh_apply(&d.system, &StepFuzzySet::indicator(&k)), StepFuzzySet::indicator(&hyper_apply(&d.system, &k)));
    }
}

fn random_trace(r: &mut impl Rng, len: usize) -> DistanceTrace<Rational> {
    DistanceTrace {
        level: Level::Base,
        left: "x".into(),
        right: "y".into(),
        values: (0..len).map(|_| rat(r.gen_range(0..=24), 8)).collect(),
    }
}

#[test]
fn profile_bounds() {
    let grid = default_grid();
    for t in 0..200 {
        let mut r = substream(14, t);
        let len = r.gen_range(1..400);
        let tr = random_trace(&mut r, len);
        let checkpoints: Vec<usize> = [len / 4, len / 2, len].into_iter().filter(|&c| c > 0).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        let p = distributional_profile(&tr, &grid, &checkpoints).unwrap();
        let (mut lo_prev, mut hi_prev) = (0.0, 0.0);
        for g in 0..grid.len() {
            let (lo, hi) = (p.phi_lower(g), p.phi_upper(g));
            assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
            assert!(lo <= hi);
            assert!(lo >= lo_prev && hi >= hi_prev, "not monotone in delta");
            (lo_prev, hi_prev) = (lo, hi);
            for c in 0..checkpoints.len() {
                let e = p.exact_ratio(g, c);
                assert!(e >= int(0) && e <= int(1));
            }
        }
    }
}

#[test]
fn a_smaller_proximal_tolerance_never_adds_proximal_pairs() {
    let grid = default_grid();
    for t in 0..300 {
        let mut r = substream(15, t);
        let len = r.gen_range(1..50);
        let tr = random_trace(&mut r, len);
        let p = distributional_profile(&tr, &grid, &[tr.horizon()]).unwrap();
        let loose = ClassifierConfig { prox_tol: 0.2, ..Default::default() };
        let tight = ClassifierConfig { prox_tol: 0.01, ..Default::default() };
        if classify_pair(&p, &tight).unwrap().holds("proximal") {
            assert!(classify_pair(&p, &loose).unwrap().holds("proximal"));
        }
        let zero = ClassifierConfig { prox_tol: 0.0, ..Default::default() };
        let has_zero = tr.values.iter().any(|d| *d == int(0));
        assert_eq!(classify_pair(&p, &zero).unwrap().holds("proximal"), has_zero);
    }
}

#[test]
fn bridge_inequality_on_bounded_traces() {
    let grid = default_grid();
    for t in 0..200 {
        let mut r = substream(16, t);
        let len = r.gen_range(1..300);
        let tr = random_trace(&mut r, len);
        let rep = bridge_check(&tr, &int(3), &grid).unwrap();
        assert!(rep.pass(), "trial {t}: {:?}", rep.violations.first());
        assert!(rep.checked > 0);
    }
    let mut r = substream(16, 999);
    let tr = random_trace(&mut r, 50);
    assert!(bridge_check(&tr, &rat(1, 100), &grid).is_err());
}

#[test]
fn lifted_tuples_are_dominated_by_the_set_distances() {
    for t in 0..200 {
        let mut r = substream(17, t);
        let d = draw(t, &mut r);
        let n = r.gen_range(1..4);
        let mut alphas = open_levels(&mut r, n - 1, 10);
        alphas.push(int(1));
        let ks: Vec<CompactSet<Plane>> = (0..n).map(|_| compact_from(&mut r, &d.universe, &d.pool, 4)).collect();
        let ls: Vec<CompactSet<Plane>> = (0..n).map(|_| compact_from(&mut r, &d.universe, &d.pool, 4)).collect();
        let rep = lift_proximal_tuple(&d.system, &ks, &ls, &alphas, 6).unwrap();
        assert!(rep.holds, "trial {t}");
        assert_eq!(rep.rows.len(), 7);
    }
}

#[test]
fn scalar_tolerances_are_symmetric() {
    let a = 0.1_f64 + 0.2;
    assert!(a.eq_tol(&0.3) && 0.3.eq_tol(&a));
    assert!(rat(1, 3).eq_tol(&rat(2, 6)));
}
