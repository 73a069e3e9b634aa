//! Proximality and sensitivity diagnostics, and the constructions moving
//! witnesses between the base, hyperspace and fuzzy levels.

pub mod generators;
pub mod sensitivity;

use rayon::prelude::*;
use serde::Serialize;

use crate::chaos::{for_each_distance, DistanceTrace, Element, Level};
use crate::error::{domain, Result};
use crate::fuzzy::{fuzzy_distance, zadeh_apply, MetricKind, StepFuzzySet};
use crate::hyper::{hausdorff, hyper_apply, CompactSet};
use crate::scalar::{Rational, Scalar};
use crate::spaces::{System, Universe};

pub use generators::{CandidateGenerator, GeneratorRegistry};
pub use sensitivity::{
    collective_witness, forward_instance, sensitivity_extract_level, sensitivity_search, shift_system,
    CollectiveWitness, LevelWitness, SensitivityWitness,
};

/// Smallest trace value and the first `j` attaining it.
pub fn proximal_min<S: Scalar>(trace: &DistanceTrace<S>) -> Result<(S, usize)> {
    let mut best: Option<(S, usize)> = None;
    for (i, d) in trace.values.iter().enumerate() {
        if best.as_ref().is_none_or(|(b, _)| d.lt_tol(b)) {
            best = Some((d.clone(), i + 1));
        }
    }
    best.map_or_else(|| domain("empty trace"), Ok)
}

#[derive(Debug, Clone, Serialize)]
pub struct LiftRow {
    pub n: usize,
    pub sup: String,
    pub bound: String,
    pub equal: bool,
}

pub struct LiftReport<U: Universe> {
    pub u: StepFuzzySet<U>,
    pub v: StepFuzzySet<U>,
    pub rows: Vec<LiftRow>,
    /// `d∞(f̂^n u', f̂^n v') ≤ max_l d_H(f̄^n K_l, f̄^n L_l)` for every `n ≤ horizon`.
    pub holds: bool,
    pub equalities: usize,
}

/// `u' = max_l α_l χ_{K_l}`, `v' = max_l α_l χ_{L_l}` and the sup-distance bound
/// along `n = 0..=horizon`.
pub fn lift_proximal_tuple<U: Universe>(
    system: &System<U>,
    ks: &[CompactSet<U>],
    ls: &[CompactSet<U>],
    alphas: &[Rational],
    horizon: usize,
) -> Result<LiftReport<U>> {
    if ks.is_empty() || ks.len() != ls.len() || ks.len() != alphas.len() {
        return domain("need N ≥ 1 sets on each side and N levels");
    }
    let zip = |sets: &[CompactSet<U>]| -> Vec<(Rational, CompactSet<U>)> {
        alphas.iter().cloned().zip(sets.iter().cloned()).collect()
    };
    let u = StepFuzzySet::from_levels(&zip(ks))?;
    let v = StepFuzzySet::from_levels(&zip(ls))?;
    let (mut uj, mut vj) = (u.clone(), v.clone());
    let (mut kj, mut lj) = (ks.to_vec(), ls.to_vec());
    let mut rows = Vec::with_capacity(horizon + 1);
    let (mut holds, mut equalities) = (true, 0);
    for n in 0..=horizon {
        if n > 0 {
            uj = zadeh_apply(system, &uj);
            vj = zadeh_apply(system, &vj);
            kj = kj.iter().map(|k| hyper_apply(system, k)).collect();
            lj = lj.iter().map(|l| hyper_apply(system, l)).collect();
        }
        let sup = fuzzy_distance(MetricKind::Sup, &uj, &vj)?;
        let mut bound = U::Scalar::nought();
        for (k, l) in kj.iter().zip(&lj) {
            bound = bound.max_of(&hausdorff(k, l)?);
        }
        let equal = sup.eq_tol(&bound);
        holds &= sup.le_tol(&bound);
        equalities += usize::from(equal);
        rows.push(LiftRow {
            n,
            sup: sup.to_string(),
            bound: bound.to_string(),
            equal,
        });
    }
    Ok(LiftReport {
        u,
        v,
        rows,
        holds,
        equalities,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverageCell {
    pub cell: usize,
    /// The proximal pair found near the mesh pair, with its minimum and first index.
    pub witness: Option<(String, String, f64, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverageReport {
    pub level: Level,
    pub horizon: usize,
    pub cells: Vec<CoverageCell>,
    pub covered: usize,
    pub fraction: f64,
}

/// For each mesh pair `(x, y)` looks for `x'`, `y'` within `eps` (the pair
/// itself first, then generator candidates) whose trace dips to `prox_tol`.
pub fn proximal_coverage<U: Universe>(
    level: Level,
    system: &System<U>,
    mesh: &[(Element<U>, Element<U>)],
    generator: &dyn CandidateGenerator<U>,
    eps: &Rational,
    horizon: usize,
    prox_tol: f64,
) -> Result<CoverageReport> {
    if mesh.is_empty() {
        return domain("empty mesh");
    }
    let universe = system.universe();
    let near = |e: &Element<U>| -> Result<Vec<Element<U>>> {
        let mut out = vec![e.clone()];
        out.extend(generator.candidates(universe, level, e, eps)?);
        Ok(out)
    };
    let cells: Vec<CoverageCell> = mesh
        .par_iter()
        .enumerate()
        .map(|(cell, (x, y))| -> Result<CoverageCell> {
            let (xs, ys) = (near(x)?, near(y)?);
            for a in &xs {
                for b in &ys {
                    if a == b {
                        continue;
                    }
                    let mut best: Option<(f64, usize)> = None;
                    for_each_distance(level, system, a, b, horizon, |j, d| {
                        let d = d.to_f64();
                        if best.is_none_or(|(m, _)| d < m) {
                            best = Some((d, j));
                        }
                    })?;
                    if let Some((m, j)) = best.filter(|(m, _)| *m <= prox_tol) {
                        let u = universe.as_ref();
                        return Ok(CoverageCell {
                            cell,
                            witness: Some((a.describe(u), b.describe(u), m, j)),
                        });
                    }
                }
            }
            Ok(CoverageCell { cell, witness: None })
        })
        .collect::<Result<_>>()?;
    let covered = cells.iter().filter(|c| c.witness.is_some()).count();
    Ok(CoverageReport {
        level,
        horizon,
        fraction: covered as f64 / cells.len() as f64,
        covered,
        cells,
    })
}
