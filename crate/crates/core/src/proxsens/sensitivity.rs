//! Sensitivity witnesses, collective perturbations and level extraction.

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::chaos::{element_distance, Element, Level};
use crate::error::{domain, Error, Result};
use crate::fuzzy::{fuzzy_distance, zadeh_iterate, MetricKind, StepFuzzySet};
use crate::hyper::{hausdorff, hyper_iterate, CompactSet};
use crate::scalar::{int, rat, Rational, Scalar};
use crate::spaces::sequence::{SequenceUniverse, ShiftVector};
use crate::spaces::{distance, System, Universe};

use super::generators::CandidateGenerator;

pub struct SensitivityWitness<U: Universe> {
    pub level: Level,
    pub center: Element<U>,
    pub neighbor: Element<U>,
    pub n: usize,
    pub delta: Rational,
    pub eps: Rational,
    pub initial: U::Scalar,
    pub separation: U::Scalar,
}

impl<U: Universe> SensitivityWitness<U> {
    /// Recomputes both distances from scratch.
    pub fn revalidate(&self, system: &System<U>) -> Result<bool> {
        let u = system.universe().as_ref();
        let d0 = element_distance(self.level, u, &self.center, &self.neighbor)?;
        let (mut a, mut b) = (self.center.clone(), self.neighbor.clone());
        for _ in 0..self.n {
            a = a.step(system);
            b = b.step(system);
        }
        let dn = element_distance(self.level, u, &a, &b)?;
        Ok(d0.lt_tol(&U::Scalar::from_rational(&self.delta))
            && U::Scalar::from_rational(&self.eps).lt_tol(&dn)
            && d0.eq_tol(&self.initial)
            && dn.eq_tol(&self.separation))
    }

    pub fn to_json(&self, universe: &U) -> Value {
        json!({
            "level": self.level.to_string(),
            "center": self.center.describe(universe),
            "neighbor": self.neighbor.describe(universe),
            "n": self.n,
            "delta": self.delta.to_string(),
            "eps": self.eps.to_string(),
            "initial": self.initial.to_string(),
            "separation": self.separation.to_string(),
        })
    }
}

fn positive(name: &str, x: &Rational) -> Result<()> {
    if *x <= int(0) {
        return domain(format!("{name} must be positive, got {x}"));
    }
    Ok(())
}

/// The first candidate (in generator order) and the first time `n ≤ horizon`
/// at which its orbit is more than `eps` away from the center's.
pub fn sensitivity_search<U: Universe>(
    level: Level,
    system: &System<U>,
    center: &Element<U>,
    delta: &Rational,
    eps: &Rational,
    horizon: usize,
    generator: &dyn CandidateGenerator<U>,
) -> Result<Option<SensitivityWitness<U>>> {
    positive("δ", delta)?;
    positive("ε", eps)?;
    if !center.fits(level) {
        return domain(format!("center does not live at level {level}"));
    }
    let universe = system.universe();
    let cands = generator.candidates(universe, level, center, delta)?;
    let d = U::Scalar::from_rational(delta);
    let e = U::Scalar::from_rational(eps);
    let mut initial = Vec::with_capacity(cands.len());
    for c in &cands {
        let d0 = element_distance(level, universe.as_ref(), center, c)?;
        if !d0.lt_tol(&d) {
            return Err(Error::Generator(format!(
                "{} produced {} at distance {d0} ≥ δ = {delta}",
                generator.name(),
                c.describe(universe)
            )));
        }
        initial.push(d0);
    }
    let found = (0..cands.len()).into_par_iter().find_map_first(|i| {
        let (mut a, mut b) = (center.clone(), cands[i].clone());
        for n in 1..=horizon {
            a = a.step(system);
            b = b.step(system);
            match element_distance(level, universe.as_ref(), &a, &b) {
                Ok(dn) if e.lt_tol(&dn) => return Some(Ok((i, n, dn))),
                Ok(_) => {}
                Err(err) => return Some(Err(err)),
            }
        }
        None
    });
    match found {
        None => Ok(None),
        Some(Err(err)) => Err(err),
        Some(Ok((i, n, separation))) => Ok(Some(SensitivityWitness {
            level,
            center: center.clone(),
            neighbor: cands[i].clone(),
            n,
            delta: delta.clone(),
            eps: eps.clone(),
            initial: initial[i].clone(),
            separation,
        })),
    }
}

#[derive(Debug, Clone)]
pub struct CollectiveWitness<U: Universe> {
    pub ys: Vec<U::Point>,
    pub perturbed: Vec<bool>,
    /// `d(x_j, y_j)`.
    pub moves: Vec<U::Scalar>,
    /// `d(T^n x_1, T^n y_j)`.
    pub separations: Vec<U::Scalar>,
    pub pass: bool,
}

/// `y_j = x_j + x̃` when `T^n x_j` is within `ε/2` of `T^n x_1`, else `y_j = x_j`.
pub fn collective_witness<U: Universe>(
    system: &System<U>,
    xs: &[U::Point],
    x_tilde: &U::Point,
    n: usize,
    eps: &Rational,
    delta: &Rational,
) -> Result<CollectiveWitness<U>> {
    let u = system.universe().as_ref();
    let zero = u.origin()?;
    if xs.is_empty() {
        return domain("need at least one point");
    }
    positive("ε", eps)?;
    let (e, d) = (U::Scalar::from_rational(eps), U::Scalar::from_rational(delta));
    let half = e.halve();
    if !distance(u, x_tilde, &zero)?.lt_tol(&d) {
        return Err(Error::Precondition(format!("d(x̃, 0) is not below δ = {delta}")));
    }
    if !e.lt_tol(&distance(u, &system.iterate(x_tilde, n), &zero)?) {
        return Err(Error::Precondition(format!("d(T^{n} x̃, 0) is not above ε = {eps}")));
    }
    let anchor = system.iterate(&xs[0], n);
    let mut w = CollectiveWitness {
        ys: Vec::with_capacity(xs.len()),
        perturbed: Vec::new(),
        moves: Vec::new(),
        separations: Vec::new(),
        pass: true,
    };
    for x in xs {
        let close = distance(u, &anchor, &system.iterate(x, n))?.le_tol(&half);
        let y = if close { u.add(x, x_tilde)? } else { x.clone() };
        let mv = distance(u, x, &y)?;
        let sep = distance(u, &anchor, &system.iterate(&y, n))?;
        w.pass &= mv.lt_tol(&d) && half.lt_tol(&sep);
        w.ys.push(y);
        w.perturbed.push(close);
        w.moves.push(mv);
        w.separations.push(sep);
    }
    Ok(w)
}

pub struct LevelWitness<U: Universe> {
    pub alpha: Rational,
    pub level_set: CompactSet<U>,
    /// `d_H(K, v_α)`.
    pub before: U::Scalar,
    /// `d_H(f̄^n K, f̄^n v_α)`.
    pub after: U::Scalar,
}

/// The level window searched for each metric: `(lo, lo_closed, hi)`.
pub fn extraction_window(metric: MetricKind, eps: &Rational) -> (Rational, bool, Rational) {
    let one = int(1);
    match metric {
        MetricKind::Sup | MetricKind::Skorokhod => (int(0), true, one),
        MetricKind::Sendograph => (int(0), true, one - eps),
        MetricKind::Endograph => (eps.clone(), false, one - eps),
    }
}

/// A level `α` with `d_H(K, v_α) < δ` and `d_H(f̄^n K, f̄^n v_α) > ε`, given that
/// `χ_K` and `v` are `δ`-close and `ε`-separated at time `n` for `metric`.
pub fn sensitivity_extract_level<U: Universe>(
    metric: MetricKind,
    system: &System<U>,
    k: &CompactSet<U>,
    v: &StepFuzzySet<U>,
    n: usize,
    eps: &Rational,
    delta: &Rational,
) -> Result<LevelWitness<U>> {
    positive("δ", delta)?;
    if delta >= eps {
        return domain("need δ < ε");
    }
    let limit = match metric {
        MetricKind::Endograph => Some(rat(1, 2)),
        MetricKind::Sendograph => Some(int(1)),
        _ => None,
    };
    if let Some(l) = limit {
        if *eps >= l {
            return domain(format!("ε must be below {l} for the {metric} metric"));
        }
    }
    let (e, d) = (U::Scalar::from_rational(eps), U::Scalar::from_rational(delta));
    let ck = StepFuzzySet::indicator(k);
    if !fuzzy_distance(metric, &ck, v)?.lt_tol(&d) {
        return domain("χ_K and v are not δ-close");
    }
    let kn = hyper_iterate(system, k, n);
    let vn = zadeh_iterate(system, v, n);
    if !e.lt_tol(&fuzzy_distance(metric, &StepFuzzySet::indicator(&kn), &vn)?) {
        return domain("the time-n images are not ε-separated");
    }
    let (lo, closed, hi) = extraction_window(metric, eps);
    for alpha in v.window_levels(&lo, closed, &hi) {
        let level_set = v.level_set(&alpha);
        let before = hausdorff(k, &level_set)?;
        if !before.lt_tol(&d) {
            continue;
        }
        let after = hausdorff(&kn, &hyper_iterate(system, &level_set, n))?;
        if e.lt_tol(&after) {
            return Ok(LevelWitness {
                alpha,
                level_set,
                before,
                after,
            });
        }
    }
    Err(Error::Invariant(format!(
        "no level in the {metric} window separates f^{n}(K) from f^{n}(v_α)"
    )))
}

/// A weighted backward shift on finitely supported sequences.
pub fn shift_system(weight: &Rational) -> System<SequenceUniverse> {
    let w = weight.clone();
    System::new(Arc::new(SequenceUniverse), format!("backward-shift[w={weight}]"), move |x: &ShiftVector| {
        x.backward_shift(&w)
    })
}

pub struct ExtractionInstance {
    pub metric: MetricKind,
    pub k: CompactSet<SequenceUniverse>,
    pub v: StepFuzzySet<SequenceUniverse>,
    pub n: usize,
    pub eps: Rational,
    pub delta: Rational,
}

fn small_vector(rng: &mut impl Rng) -> ShiftVector {
    let len = rng.gen_range(0..=2);
    ShiftVector::from_pairs((0..len).map(|_| (rng.gen_range(0..4), rat(rng.gen_range(-3..=3), rng.gen_range(1..=2)))))
}

/// Builds `K` and a fuzzy `v` near `χ_K` whose extra or moved points carry a
/// perturbation `η e_m` that the shift (weight 2) expands by time `n`. Returns
/// `None` when the draw misses the extraction preconditions.
pub fn forward_instance(
    rng: &mut impl Rng,
    system: &System<SequenceUniverse>,
    metric: MetricKind,
) -> Option<ExtractionInstance> {
    let uni = Arc::clone(system.universe());
    let mut base: Vec<ShiftVector> = (0..rng.gen_range(1..=3)).map(|_| small_vector(rng)).collect();
    base.sort();
    base.dedup();
    let k = CompactSet::new(Arc::clone(&uni), base.clone()).ok()?;
    let eps = [rat(1, 8), rat(1, 4), rat(1, 3), rat(2, 5)][rng.gen_range(0..4)].clone();
    let delta = &eps * rat(rng.gen_range(1..=3), 4);
    let eta = &delta * rat(rng.gen_range(1..=3), 4);
    let n = rng.gen_range(3..=8);
    let m = n + rng.gen_range(0..=2);
    let kick = ShiftVector::unit(m).scaled(&eta);

    let mut membership = std::collections::BTreeMap::new();
    for x in &base {
        membership.insert(x.clone(), int(1));
    }
    let target = base[rng.gen_range(0..base.len())].clone();
    let moved = target.plus(&kick);
    let grade = rat(rng.gen_range(1..=12), 12);
    match rng.gen_range(0..3) {
        // extra point next to K
        0 => {
            membership.insert(moved, grade);
        }
        // the moved point replaces its source at grade 1
        1 => {
            membership.remove(&target);
            membership.insert(moved, int(1));
            if !membership.values().any(|a| *a == int(1)) {
                return None;
            }
        }
        // source demoted, moved copy at full grade
        _ => {
            membership.insert(target.clone(), grade);
            membership.insert(moved, int(1));
        }
    }
    if rng.gen_bool(0.5) {
        let noise = base[0].plus(&ShiftVector::unit(rng.gen_range(0..n)).scaled(&(&eta * rat(1, 2))));
        membership.entry(noise).or_insert(rat(rng.gen_range(1..=11), 12));
    }
    let v = StepFuzzySet::new(Arc::clone(&uni), membership).ok()?;
    let d = fuzzy_distance(metric, &StepFuzzySet::indicator(&k), &v).ok()?;
    let far = fuzzy_distance(
        metric,
        &StepFuzzySet::indicator(&hyper_iterate(system, &k, n)),
        &zadeh_iterate(system, &v, n),
    )
    .ok()?;
    (d < delta && far > eps).then_some(ExtractionInstance {
        metric,
        k,
        v,
        n,
        eps,
        delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{build_example3_system, Example3Universe};
    use crate::proxsens::generators::{pair_steps, second_coordinate_moves, BasisPerturbation, LevelNudge};
    use crate::sampling::rng;
    use crate::spaces::density::DoublingBlocks;

    #[test]
    fn shift_witness_matches_closed_form() {
        let sys = shift_system(&int(2));
        let g = BasisPerturbation { max_index: 40 };
        let zero = Element::Point(ShiftVector::zero());
        let w = sensitivity_search(Level::Base, &sys, &zero, &rat(1, 10), &int(5), 40, &g)
            .unwrap()
            .unwrap();
        // 2^n/20 > 5 first at n = 7
        assert_eq!(w.n, 7);
        assert_eq!(w.separation, rat(128, 20));
        assert_eq!(w.initial, rat(1, 20));
        assert!(w.revalidate(&sys).unwrap());
        assert_eq!(w.to_json(&SequenceUniverse)["neighbor"], "[7:1/20]");
    }

    #[test]
    fn huge_eps_gives_none() {
        let sys = shift_system(&int(2));
        let g = BasisPerturbation { max_index: 5 };
        let zero = Element::Point(ShiftVector::zero());
        assert!(sensitivity_search(Level::Base, &sys, &zero, &rat(1, 10), &int(1000), 30, &g).unwrap().is_none());
    }

    #[test]
    fn isometry_has_no_witness() {
        let sys = build_example3_system(Arc::new(DoublingBlocks)).unwrap();
        let uni: &Arc<Example3Universe> = sys.universe();
        let u = StepFuzzySet::from_pairs(uni.clone(), [((0, int(0)), int(1)), ((0, int(1)), rat(1, 2))]).unwrap();
        let lvl = Level::Fuzzy(MetricKind::Endograph);
        for g in [
            &LevelNudge as &dyn CandidateGenerator<Example3Universe>,
            &second_coordinate_moves::<Example3Universe>(pair_steps()),
        ] {
            let r = sensitivity_search(lvl, &sys, &Element::Fuzzy(u.clone()), &rat(1, 2), &rat(3, 5), 64, g).unwrap();
            assert!(r.is_none());
        }
    }

    struct Liar;
    impl CandidateGenerator<SequenceUniverse> for Liar {
        fn name(&self) -> &str {
            "liar"
        }
        fn candidates(
            &self,
            _: &Arc<SequenceUniverse>,
            _: Level,
            _: &Element<SequenceUniverse>,
            _: &Rational,
        ) -> Result<Vec<Element<SequenceUniverse>>> {
            Ok(vec![Element::Point(ShiftVector::unit(0))])
        }
    }

    #[test]
    fn out_of_ball_candidates_are_rejected() {
        let sys = shift_system(&int(2));
        let zero = Element::Point(ShiftVector::zero());
        let r = sensitivity_search(Level::Base, &sys, &zero, &rat(1, 2), &int(1), 5, &Liar);
        assert!(matches!(r, Err(Error::Generator(_))));
    }

    #[test]
    fn collective_on_the_shift() {
        let sys = shift_system(&int(2));
        let (eps, delta) = (int(1), rat(1, 10));
        let x_tilde = ShiftVector::unit(6).scaled(&rat(1, 20));
        let xs = vec![ShiftVector::zero(), ShiftVector::unit(1), ShiftVector::unit(2)];
        let w = collective_witness(&sys, &xs, &x_tilde, 6, &eps, &delta).unwrap();
        assert!(w.pass);
        assert_eq!(w.perturbed, vec![true, true, true]);
        assert!(w.separations.iter().all(|s| *s > rat(1, 2)));

        let spread = vec![ShiftVector::zero(), ShiftVector::unit(7).scaled(&int(1))];
        let w = collective_witness(&sys, &spread, &x_tilde, 6, &eps, &delta).unwrap();
        assert_eq!(w.perturbed, vec![true, false]);
        assert_eq!(w.ys[1], spread[1]);

        assert!(matches!(
            collective_witness(&sys, &xs, &ShiftVector::unit(1), 6, &eps, &delta),
            Err(Error::Precondition(_))
        ));
        let ex3 = build_example3_system(Arc::new(DoublingBlocks)).unwrap();
        assert!(matches!(
            collective_witness(&ex3, &[(0, int(0))], &(0, int(0)), 1, &eps, &delta),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn extraction_on_forward_instances() {
        let sys = shift_system(&int(2));
        let mut r = rng(4);
        let mut done = 0;
        for i in 0..2000 {
            let m = MetricKind::ALL[i % 4];
            if let Some(inst) = forward_instance(&mut r, &sys, m) {
                let w = sensitivity_extract_level(m, &sys, &inst.k, &inst.v, inst.n, &inst.eps, &inst.delta).unwrap();
                assert!(w.before < inst.delta && w.after > inst.eps);
                done += 1;
            }
        }
        assert!(done > 200, "only {done} instances");
    }

    #[test]
    fn extraction_preconditions() {
        let sys = shift_system(&int(2));
        let uni = sys.universe().clone();
        let k = CompactSet::new(uni.clone(), [ShiftVector::zero()]).unwrap();
        let v = StepFuzzySet::indicator(&k);
        let e = MetricKind::Endograph;
        assert!(matches!(sensitivity_extract_level(e, &sys, &k, &v, 1, &rat(1, 2), &rat(1, 4)), Err(Error::Domain(_))));
        assert!(matches!(sensitivity_extract_level(e, &sys, &k, &v, 1, &rat(1, 4), &rat(1, 3)), Err(Error::Domain(_))));
        assert!(matches!(sensitivity_extract_level(e, &sys, &k, &v, 1, &rat(1, 4), &rat(1, 8)), Err(Error::Domain(_))));
    }
}
