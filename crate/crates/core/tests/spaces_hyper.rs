use std::sync::Arc;

use fuzzdyn::gallery::universes::unit_steps;
use fuzzdyn::gallery::{build_example1_system, build_example2_system, build_example3_system};
use fuzzdyn::hyper::hyper_apply;
use fuzzdyn::proxsens::shift_system;
use fuzzdyn::sampling::{compact_from, plane_universe, substream};
use fuzzdyn::scalar::{int, rat};
use fuzzdyn::spaces::density::{DoublingBlocks, FactorialBlocks, SquaredExponents};
use fuzzdyn::spaces::sequence::ShiftVector;
use fuzzdyn::spaces::validate_metric;
use fuzzdyn::{hausdorff, CompactSet, Rational, Scalar, System, Universe};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn example_points_binary(r: &mut impl Rng, k: usize) -> Vec<(u64, u8)> {
    (0..k).map(|_| (r.gen_range(0..30), r.gen_range(0..2))).collect()
}

fn example_points_unit(r: &mut impl Rng, k: usize, max_n: u64) -> Vec<(u64, Rational)> {
    let steps = unit_steps(9);
    (0..k).map(|_| (r.gen_range(0..max_n), steps.choose(r).unwrap().clone())).collect()
}

#[test]
fn example_metrics_pass_the_axioms_on_random_samples() {
    let e1 = build_example1_system(Arc::new(FactorialBlocks)).unwrap();
    let e2 = build_example2_system(Arc::new(SquaredExponents)).unwrap();
    let e3 = build_example3_system(Arc::new(DoublingBlocks)).unwrap();
    for t in 0..1000 {
        let mut r = substream(1, t);
        let k = r.gen_range(2..=12);
        let s1 = example_points_binary(&mut r, k);
        assert!(validate_metric(e1.universe().as_ref(), &s1).pass(), "example 1: {s1:?}");
        let s3 = example_points_unit(&mut r, k, 30);
        assert!(validate_metric(e3.universe().as_ref(), &s3).pass(), "example 3: {s3:?}");
        // small first coordinates keep the float sums exact enough for the triangle check
        let s2 = example_points_unit(&mut r, k, 20);
        assert!(validate_metric(e2.universe().as_ref(), &s2).pass(), "example 2: {s2:?}");
    }
}

#[test]
fn example_metrics_on_exhaustive_samples() {
    let e1 = build_example1_system(Arc::new(FactorialBlocks)).unwrap();
    let all: Vec<(u64, u8)> = (0..8).flat_map(|n| [(n, 0), (n, 1)]).chain([(24, 0), (24, 1), (119, 1), (120, 0)]).collect();
    assert!(validate_metric(e1.universe().as_ref(), &all).pass());
    let e3 = build_example3_system(Arc::new(DoublingBlocks)).unwrap();
    let all: Vec<(u64, Rational)> = (0..9).flat_map(|n| unit_steps(3).into_iter().map(move |t| (n, t))).collect();
    assert!(validate_metric(e3.universe().as_ref(), &all).pass());
    let e2 = build_example2_system(Arc::new(SquaredExponents)).unwrap();
    let all: Vec<(u64, Rational)> = [0, 1, 2, 3, 15, 16, 17].into_iter().flat_map(|n| unit_steps(3).into_iter().map(move |t| (n, t))).collect();
    assert!(validate_metric(e2.universe().as_ref(), &all).pass());
}

#[test]
fn shift_metric_axioms() {
    let sys = shift_system(&int(2));
    let mut r = substream(2, 0);
    let pts: Vec<ShiftVector> = (0..10)
        .map(|_| ShiftVector::from_pairs((0..3).map(|_| (r.gen_range(0..5), rat(r.gen_range(-4..=4), 3)))))
        .collect();
    assert!(validate_metric(sys.universe().as_ref(), &pts).pass());
}

proptest! {
    #[test]
    fn iterates_compose(m in 0usize..=32, n in 0usize..=32, a in 0u64..50, t in 0i64..=4) {
        let e3 = build_example3_system(Arc::new(DoublingBlocks)).unwrap();
        let p = (a, rat(t, 4));
        prop_assert_eq!(e3.iterate(&p, m + n), e3.iterate(&e3.iterate(&p, m), n));
        let sh = shift_system(&rat(3, 2));
        let x = ShiftVector::from_pairs([(a as usize % 40, rat(t + 1, 2)), (3, int(1))]);
        prop_assert_eq!(sh.iterate(&x, m + n), sh.iterate(&sh.iterate(&x, m), n));
    }
}

fn plane_sets(t: u64, count: usize) -> (Arc<fuzzdyn::spaces::finite::FiniteUniverse<Rational>>, Vec<CompactSet<fuzzdyn::spaces::finite::FiniteUniverse<Rational>>>) {
    let mut r = substream(3, t);
    let u = Arc::new(plane_universe(&mut r, 10, "h"));
    let pool: Vec<usize> = u.points().collect();
    let sets = (0..count).map(|_| compact_from(&mut r, &u, &pool, 10)).collect();
    (u, sets)
}

#[test]
fn hausdorff_metric_axioms() {
    for t in 0..1000 {
        let (_, s) = plane_sets(t, 3);
        let (a, b, c) = (&s[0], &s[1], &s[2]);
        let ab = hausdorff(a, b).unwrap();
        assert_eq!(ab, hausdorff(b, a).unwrap());
        assert_eq!(ab == int(0), a == b);
        assert!(ab <= hausdorff(a, c).unwrap() + hausdorff(c, b).unwrap());
    }
}

#[test]
fn union_bound_and_decomposition() {
    for t in 0..1000 {
        let (_, s) = plane_sets(t, 4);
        let lhs = hausdorff(&s[0].union(&s[1]).unwrap(), &s[2].union(&s[3]).unwrap()).unwrap();
        assert!(lhs <= hausdorff(&s[0], &s[2]).unwrap().max(hausdorff(&s[1], &s[3]).unwrap()));
        let kl = s[0].union(&s[1]).unwrap();
        let split = hausdorff(&kl, &s[1]).unwrap().max(hausdorff(&s[0], &kl).unwrap());
        assert_eq!(hausdorff(&s[0], &s[1]).unwrap(), split);
    }
}

#[test]
fn hyper_map_preserves_unions() {
    for t in 0..300 {
        let (u, s) = plane_sets(t, 2);
        let n = u.len();
        let mut r = substream(4, t);
        let table: Vec<usize> = (0..n).map(|_| r.gen_range(0..n)).collect();
        let sys = System::new(Arc::clone(&u), "table", move |p: &usize| table[*p]);
        let whole = hyper_apply(&sys, &s[0].union(&s[1]).unwrap());
        assert_eq!(whole, hyper_apply(&sys, &s[0]).union(&hyper_apply(&sys, &s[1])).unwrap());
    }
}

#[test]
fn example1_hausdorff_of_singletons_is_the_metric() {
    let sys = build_example1_system(Arc::new(FactorialBlocks)).unwrap();
    let u = sys.universe();
    let k = CompactSet::singleton(Arc::clone(u), (24, 0)).unwrap();
    let l = CompactSet::singleton(Arc::clone(u), (24, 1)).unwrap();
    assert_eq!(hausdorff(&k, &l).unwrap(), rat(1, 24));
    assert_eq!(u.metric(&(5, 0), &(2, 1)).to_f64(), 3.0);
}
