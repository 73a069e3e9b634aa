//! The weighted backward shift on finitely supported rational sequences.

use std::sync::Arc;

use rand::Rng;
use serde_json::json;

use crate::chaos::{transfer_check, Element, Level};
use crate::error::{Error, Result};
use crate::fuzzy::MetricKind;
use crate::hyper::CompactSet;
use crate::proxsens::generators::BasisPerturbation;
use crate::proxsens::{sensitivity_search, shift_system};
use crate::report::Report;
use crate::sampling::{rng, small_rational};
use crate::scalar::{int, rat, Rational};
use crate::spaces::sequence::{SequenceUniverse, ShiftVector};
use crate::spaces::{System, Universe};

#[derive(Debug, Clone)]
pub struct ShiftParams {
    pub weight: Rational,
    pub horizon: usize,
    pub eps: Vec<Rational>,
    pub delta: Rational,
    /// Sampled vectors for the orbit and transfer claims.
    pub samples: usize,
    pub alpha: Rational,
    pub beta: Rational,
    pub seed: u64,
}

impl Default for ShiftParams {
    fn default() -> Self {
        ShiftParams {
            weight: int(2),
            horizon: 64,
            eps: [1, 10, 100, 1000].into_iter().map(int).collect(),
            delta: rat(1, 10),
            samples: 20,
            alpha: rat(2, 3),
            beta: rat(1, 3),
            seed: 0,
        }
    }
}

fn sample_vector(r: &mut impl Rng, max_index: usize) -> ShiftVector {
    loop {
        let k = r.gen_range(1..=3);
        let v = ShiftVector::from_pairs((0..k).map(|_| (r.gen_range(0..=max_index), small_rational(r, 5, 4))));
        if !v.is_zero() {
            return v;
        }
    }
}

/// `‖T^j x‖` for `j = 0..=horizon`.
fn orbit_norms(sys: &System<SequenceUniverse>, x: &ShiftVector, horizon: usize) -> Vec<Rational> {
    let mut out = vec![x.l1_norm()];
    let mut y = x.clone();
    for _ in 0..horizon {
        y = sys.apply(&y);
        out.push(y.l1_norm());
    }
    out
}

pub fn shift_demo(p: &ShiftParams) -> Result<Report> {
    if p.weight <= int(1) {
        return Err(Error::Config(format!("shift weight must exceed 1, got {}", p.weight)));
    }
    let sys = shift_system(&p.weight);
    let uni = Arc::clone(sys.universe());
    let mut rep = Report::new("shift", Some(p.seed));

    // (i) non-equicontinuity at 0
    let mut found = Vec::new();
    let mut ok = true;
    for eps in &p.eps {
        let g = BasisPerturbation { max_index: p.horizon };
        let zero = Element::Point(ShiftVector::zero());
        match sensitivity_search(Level::Base, &sys, &zero, &p.delta, eps, p.horizon, &g)? {
            Some(w) => {
                let Element::Point(y) = &w.neighbor else { unreachable!() };
                let expected = y.max_index().map(|n| {
                    let wn = (0..n).fold(int(1), |acc, _| acc * &p.weight);
                    wn * &p.delta / int(2)
                });
                ok &= w.revalidate(&sys)? && expected.as_ref() == Some(&w.separation) && w.separation > *eps;
                found.push(w.to_json(uni.as_ref()));
            }
            None => {
                ok = false;
                found.push(json!({"eps": eps.to_string(), "witness": null}));
            }
        }
    }
    rep.claim("non-equicontinuity", ok, [("witnesses", json!(found))]);

    // (ii) every orbit in the sample reaches exactly 0
    let mut r = rng(p.seed);
    let mut xs = vec![ShiftVector::unit(2)];
    xs.extend((0..p.samples).map(|_| sample_vector(&mut r, 8)));
    let mut rows = Vec::new();
    let mut ok = true;
    for x in &xs {
        let m = x.max_index().expect("nonzero");
        let before = sys.iterate(x, m);
        let after = sys.apply(&before);
        ok &= after.is_zero() && !before.is_zero();
        rows.push(json!({"x": uni.format_point(x), "steps": m + 1, "last_nonzero": uni.format_point(&before)}));
    }
    rep.claim("orbits-reach-zero", ok, [("vectors", json!(rows))]);

    // (iii) u^α family over {0} ⊂ {0, x}
    let mut xs = vec![ShiftVector::unit(3)];
    xs.extend((0..p.samples).map(|_| sample_vector(&mut r, 8)));
    let gap = &p.alpha - &p.beta;
    let mut rows = Vec::new();
    let mut ok = true;
    for x in &xs {
        let k = CompactSet::new(Arc::clone(&uni), [ShiftVector::zero()])?;
        let l = CompactSet::new(Arc::clone(&uni), [ShiftVector::zero(), x.clone()])?;
        let t = transfer_check(&sys, &k, &l, &p.alpha, &p.beta, p.horizon)?;
        let norms = orbit_norms(&sys, x, p.horizon);
        let hausdorff_matches = t.rows.iter().all(|row| row.hausdorff == norms[row.j].to_string());
        let cap = |m: MetricKind| if m == MetricKind::Sup { None } else { Some(gap.clone()) };
        let mut window = serde_json::Map::new();
        let mut x_ok = t.exact && hausdorff_matches;
        for m in MetricKind::ALL {
            let vals: Vec<Rational> = t.rows.iter().map(|row| row.values[&m].parse().expect("rational")).collect();
            let hi = vals.iter().max().cloned().unwrap_or_default();
            let lo = vals.iter().min().cloned().unwrap_or_default();
            let top = norms.iter().max().cloned().unwrap_or_default();
            let want = cap(m).map_or(top.clone(), |c| c.min(top));
            x_ok &= hi > int(0) && hi >= want && lo == int(0);
            window.insert(m.to_string(), json!({"max": hi.to_string(), "min": lo.to_string()}));
        }
        ok &= x_ok;
        rows.push(json!({"x": uni.format_point(x), "exact": t.exact, "window": window}));
    }
    rep.claim(
        "transfer-ly-window",
        ok,
        [
            ("alpha", json!(p.alpha.to_string())),
            ("beta", json!(p.beta.to_string())),
            ("horizon", json!(p.horizon)),
            ("vectors", json!(rows)),
        ],
    );
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_shift_orbits() {
        let sys = shift_system(&int(2));
        assert_eq!(sys.iterate(&ShiftVector::unit(2), 2), ShiftVector::unit(0).scaled(&int(4)));
        assert!(sys.iterate(&ShiftVector::unit(2), 3).is_zero());
        assert_eq!(sys.iterate(&ShiftVector::unit(3), 3), ShiftVector::unit(0).scaled(&int(8)));
        assert_eq!(orbit_norms(&sys, &ShiftVector::unit(3), 5), [1, 2, 4, 8, 0, 0].map(int).to_vec());
    }

    #[test]
    fn demo_claims_hold() {
        let rep = shift_demo(&ShiftParams { samples: 5, ..Default::default() }).unwrap();
        assert!(rep.pass(), "{}", rep.to_json());
        let w = &rep.get("non-equicontinuity").unwrap().evidence["witnesses"][0];
        // 2^n / 20 > 1 first at n = 5
        assert_eq!(w["n"], 5);
        assert_eq!(w["separation"], "8/5");
    }

    #[test]
    fn weight_one_is_rejected() {
        let p = ShiftParams { weight: int(1), ..Default::default() };
        assert!(matches!(shift_demo(&p), Err(Error::Config(_))));
    }
}
