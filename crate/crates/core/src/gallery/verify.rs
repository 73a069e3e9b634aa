//! Claim checks for the three pair-universe examples.

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::chaos::classify::ClassifierConfig;
use crate::chaos::io::{matrix_csv, profile_csv};
use crate::chaos::matrix::pair_profiles;
use crate::chaos::profile::grid_with;
use crate::chaos::{
    checkpoint_schedule, classify_pair, default_grid, for_each_distance, scrambled_matrix, u_alpha_family,
    DistributionalProfile, Element, Level, ProfileBuilder,
};
use crate::error::{Error, Result};
use crate::fuzzy::{fuzzy_distance, zadeh_apply, MetricKind, StepFuzzySet};
use crate::hyper::CompactSet;
use crate::report::Report;
use crate::sampling::{fuzzy_from, open_levels, rng, substream};
use crate::scalar::{int, rat, Rational, Scalar};
use crate::spaces::density::{DensitySet, DoublingBlocks, FactorialBlocks, SquaredExponents};
use crate::spaces::{System, Universe};

use super::universes::unit_steps;
use super::{build_example1_system, build_example2_system, build_example3_system, example_checkpoints, example_classifier};

fn profile_of<U: Universe>(
    level: Level,
    sys: &System<U>,
    a: &Element<U>,
    b: &Element<U>,
    horizon: usize,
    grid: &[Rational],
    checkpoints: &[usize],
) -> Result<DistributionalProfile<U::Scalar>> {
    let mut pb = ProfileBuilder::new(horizon, grid, checkpoints)?;
    for_each_distance(level, sys, a, b, horizon, |_, d| pb.push(&d))?;
    pb.finish()
}

/// Whether `d_j` stays equal to its first value for `j = 1..=horizon`.
fn constant_trace<U: Universe>(level: Level, sys: &System<U>, a: &Element<U>, b: &Element<U>, horizon: usize) -> Result<Option<U::Scalar>> {
    let mut first: Option<U::Scalar> = None;
    let mut same = true;
    for_each_distance(level, sys, a, b, horizon, |_, d| match &first {
        None => first = Some(d),
        Some(f) => same &= f.eq_tol(&d),
    })?;
    Ok(if same { first } else { None })
}

fn precondition(msg: String) -> Error {
    Error::Precondition(msg)
}

#[derive(Debug, Clone)]
pub struct Example1Params {
    pub horizon: usize,
    pub checkpoints: Vec<usize>,
    pub depth: u32,
    /// Sampled point pairs and compact pairs with different projections.
    pub samples: usize,
    /// Horizon for the constancy checks.
    pub aux_horizon: usize,
    /// Compact pairs are enumerated exhaustively over `P1 ⊂ [0, width]`.
    pub exhaustive_width: u64,
    pub exhaustive_horizon: usize,
    pub alphas: usize,
    pub metrics: Vec<MetricKind>,
    pub fuzzy_horizon: usize,
    pub seed: u64,
}

impl Default for Example1Params {
    fn default() -> Self {
        Example1Params {
            horizon: 362_879,
            checkpoints: vec![5039, 40320, 362_879],
            depth: 7,
            samples: 24,
            aux_horizon: 5040,
            exhaustive_width: 3,
            exhaustive_horizon: 130,
            alphas: 4,
            metrics: MetricKind::ALL.to_vec(),
            fuzzy_horizon: 362_879,
            seed: 0,
        }
    }
}

pub fn verify_example1(p: &Example1Params) -> Result<Report> {
    let last = p.checkpoints.iter().copied().max().unwrap_or(0);
    if p.horizon == 0 || p.horizon < last {
        return Err(precondition(format!("horizon {} below checkpoint {last}", p.horizon)));
    }
    if p.alphas < 2 {
        return Err(Error::Config("need at least two alphas".into()));
    }
    let a: Arc<dyn DensitySet> = Arc::new(FactorialBlocks);
    let sys = build_example1_system(a)?;
    let uni = Arc::clone(sys.universe());
    let mut rep = Report::new("example1", Some(p.seed));
    let grid = default_grid();
    let cfg = ClassifierConfig::default();
    let sched = checkpoint_schedule(p.horizon, p.depth, &p.checkpoints);

    // (i) base pair profile
    let base = profile_of(Level::Base, &sys, &Element::Point((0, 0)), &Element::Point((0, 1)), p.horizon, &grid, &sched)?;
    let verdict = classify_pair(&base, &cfg)?;
    let g = base.index_of(&cfg.eps).expect("ε is a grid value");
    let lower = base.phi_lower(g);
    let upper = (0..grid.len()).map(|h| base.phi_upper(h)).fold(f64::INFINITY, f64::min);
    let ratios: serde_json::Map<String, serde_json::Value> = p
        .checkpoints
        .iter()
        .filter_map(|c| base.checkpoints.iter().position(|x| x == c))
        .map(|ci| (base.checkpoints[ci].to_string(), json!(base.exact_ratio(g, ci).to_string())))
        .collect();
    rep.claim(
        "base-profile",
        lower <= 0.12 && upper >= 0.89 && verdict.holds("d1"),
        [
            ("phi_lower_half", json!(lower)),
            ("min_phi_upper", json!(upper)),
            ("ratios_below_half", json!(ratios)),
            ("d1", json!(verdict.holds("d1"))),
            ("checkpoints", json!(base.checkpoints)),
        ],
    );
    rep.table("example1_base_profile", profile_csv(&base, p.seed)?);

    // (ii) point pairs with different first coordinates
    let aux = p.aux_horizon.min(p.horizon);
    let aux_sched = checkpoint_schedule(aux, p.depth, &[]);
    let mut r = rng(p.seed);
    let mut pairs = vec![((0u64, 0u8), (3u64, 1u8))];
    while pairs.len() < p.samples + 1 {
        let (n, m) = (r.gen_range(0..64u64), r.gen_range(0..64u64));
        if n != m {
            pairs.push(((n, r.gen_range(0..2)), (m, r.gen_range(0..2))));
        }
    }
    let point_rows: Vec<(bool, bool)> = pairs
        .par_iter()
        .map(|(x, y)| -> Result<(bool, bool)> {
            let (ex, ey) = (Element::Point(*x), Element::Point(*y));
            let c = constant_trace(Level::Base, &sys, &ex, &ey, aux)?;
            let ok = c == Some(int(x.0.abs_diff(y.0) as i64));
            let prof = profile_of(Level::Base, &sys, &ex, &ey, aux, &grid, &aux_sched)?;
            Ok((ok, classify_pair(&prof, &cfg)?.holds("ly")))
        })
        .collect::<Result<_>>()?;
    let nonconstant = point_rows.iter().filter(|r| !r.0).count();
    let ly = point_rows.iter().filter(|r| r.1).count();
    rep.claim(
        "point-traces-constant",
        nonconstant == 0 && ly == 0,
        [
            ("pairs", json!(pairs.len())),
            ("nonconstant", json!(nonconstant)),
            ("ly_flagged", json!(ly)),
            ("horizon", json!(aux)),
        ],
    );

    // (iii) compact pairs with different projections
    let pts: Vec<(u64, u8)> = (0..=p.exhaustive_width).flat_map(|n| [(n, 0), (n, 1)]).collect();
    let subsets: Vec<CompactSet<_>> = (1u32..(1 << pts.len()))
        .map(|mask| {
            let chosen = pts.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, q)| *q);
            CompactSet::new(Arc::clone(&uni), chosen).expect("points of the universe")
        })
        .collect();
    let proj = |k: &CompactSet<_>| -> std::collections::BTreeSet<u64> { k.points().iter().map(|q: &(u64, u8)| q.0).collect() };
    let mut set_pairs: Vec<(CompactSet<_>, CompactSet<_>, usize)> = Vec::new();
    for i in 0..subsets.len() {
        for j in i + 1..subsets.len() {
            if proj(&subsets[i]) != proj(&subsets[j]) {
                set_pairs.push((subsets[i].clone(), subsets[j].clone(), p.exhaustive_horizon));
            }
        }
    }
    let exhaustive = set_pairs.len();
    let mut sampled = 0;
    while sampled < p.samples {
        let mut draw = || {
            let k = r.gen_range(1..=4);
            CompactSet::new(Arc::clone(&uni), (0..k).map(|_| (r.gen_range(0..40u64), r.gen_range(0..2u8)))).expect("valid")
        };
        let (k, l) = (draw(), draw());
        if proj(&k) != proj(&l) {
            set_pairs.push((k, l, aux));
            sampled += 1;
        }
    }
    let bad: Vec<usize> = set_pairs
        .par_iter()
        .enumerate()
        .map(|(i, (k, l, h))| -> Result<Option<usize>> {
            let c = constant_trace(Level::Hyper, &sys, &Element::Set(k.clone()), &Element::Set(l.clone()), *h)?;
            Ok(c.is_none().then_some(i))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    rep.claim(
        "set-traces-constant",
        bad.is_empty(),
        [
            ("exhaustive_pairs", json!(exhaustive)),
            ("exhaustive_width", json!(p.exhaustive_width)),
            ("sampled_pairs", json!(sampled)),
            ("nonconstant", json!(bad.len())),
        ],
    );

    // (iv) u^α family over the base pair
    let k = CompactSet::new(Arc::clone(&uni), [(0, 0)])?;
    let l = CompactSet::new(Arc::clone(&uni), [(0, 0), (0, 1)])?;
    let steps = p.alphas as i64 + 1;
    let alphas: Vec<Rational> = (1..steps).map(|i| rat(i, steps)).collect();
    let fam: Vec<Element<_>> = u_alpha_family(&k, &l, &alphas)?.into_iter().map(Element::Fuzzy).collect();
    let gap = rat(1, steps);
    let fgrid = grid_with(&grid, std::slice::from_ref(&gap));
    let fcfg = ClassifierConfig { eps: gap.clone(), ..cfg.clone() };
    let fh = p.fuzzy_horizon.min(p.horizon);
    let fsched = checkpoint_schedule(fh, p.depth, &p.checkpoints);
    let mut counts = serde_json::Map::new();
    let mut all = true;
    for m in &p.metrics {
        let mat = scrambled_matrix(Level::Fuzzy(*m), &sys, &fam, fh, &fgrid, &fsched, &fcfg)?;
        all &= mat.all("d1");
        counts.insert(m.to_string(), json!(format!("{}/{}", mat.counts["d1"], mat.pair_count())));
        rep.table(format!("example1_matrix_{m}"), matrix_csv(&mat, p.seed)?);
    }
    rep.claim(
        "fuzzy-family-d1",
        all,
        [
            ("alphas", json!(alphas.iter().map(|a| a.to_string()).collect::<Vec<_>>())),
            ("eps", json!(gap.to_string())),
            ("horizon", json!(fh)),
            ("d1_pairs", json!(counts)),
        ],
    );
    Ok(rep)
}

#[derive(Debug, Clone)]
pub struct Example2Params {
    pub horizon: usize,
    pub depth: u32,
    pub family: usize,
    /// Random instances for each of the two fuzzy claims.
    pub instances: usize,
    pub seed: u64,
}

impl Default for Example2Params {
    fn default() -> Self {
        Example2Params {
            horizon: 1 << 16,
            depth: 7,
            family: 6,
            instances: 4,
            seed: 0,
        }
    }
}

fn mean_trace<U: Universe>(level: Level, sys: &System<U>, a: &StepFuzzySet<U>, b: &StepFuzzySet<U>, horizon: usize) -> Result<(f64, f64)> {
    let (mut sum, mut min) = (0.0, f64::INFINITY);
    for_each_distance(level, sys, &Element::Fuzzy(a.clone()), &Element::Fuzzy(b.clone()), horizon, |_, d| {
        let d = d.to_f64();
        sum += d;
        min = min.min(d);
    })?;
    Ok((sum / horizon as f64, min))
}

pub fn verify_example2(p: &Example2Params) -> Result<Report> {
    if p.horizon < 1 << 16 {
        return Err(precondition(format!("horizon {} below 2^16", p.horizon)));
    }
    if p.family < 2 {
        return Err(Error::Config("family needs two points".into()));
    }
    let a: Arc<dyn DensitySet> = Arc::new(SquaredExponents);
    let sys = build_example2_system(a)?;
    let uni = Arc::clone(sys.universe());
    let mut rep = Report::new("example2", Some(p.seed));
    let edges = example_checkpoints(2, p.horizon);
    let sched = checkpoint_schedule(p.horizon, p.depth, &edges);
    let grid = default_grid();
    let fam: Vec<Element<_>> = unit_steps(p.family as i64).into_iter().map(|t| Element::Point((0, t))).collect();

    // (i) Cesàro means of the base family
    let profiles = pair_profiles(Level::Base, &sys, &fam, p.horizon, &grid, &sched)?;
    let cfg = example_classifier(2);
    let (mut hi, mut lo, mut mly) = (f64::INFINITY, f64::NEG_INFINITY, 0);
    for (_, _, prof) in &profiles {
        let ms: Vec<f64> = prof.checkpoints.iter().map(|c| prof.mean(*c)).collect();
        hi = hi.min(ms.iter().copied().fold(f64::NEG_INFINITY, f64::max));
        lo = lo.max(ms.iter().copied().fold(f64::INFINITY, f64::min));
        mly += usize::from(classify_pair(prof, &cfg)?.holds("mly"));
    }
    let first = &profiles[0].2;
    let at = |m: usize| json!(if m <= p.horizon { Some(first.mean(m)) } else { None });
    rep.claim(
        "base-mean-oscillation",
        hi >= 1.0 && lo <= 0.01,
        [
            ("smallest_max_mean", json!(hi)),
            ("largest_min_mean", json!(lo)),
            ("mean_at_512", at(512)),
            ("mean_at_65535", at(65535)),
            ("mean_at_65536", at(65536)),
            ("mly_pairs", json!(format!("{mly}/{}", profiles.len()))),
        ],
    );
    rep.table("example2_base_profile", profile_csv(first, p.seed)?);

    // (ii) level images with different projections
    let mut r = rng(p.seed);
    let steps = unit_steps(5);
    let e = Level::Fuzzy(MetricKind::Endograph);
    let mut worst = f64::INFINITY;
    let mut case1 = Vec::new();
    for _ in 0..p.instances {
        let s = steps[r.gen_range(0..steps.len())].clone();
        let t = steps[r.gen_range(0..steps.len())].clone();
        let m = r.gen_range(1..=3u64);
        let k = CompactSet::new(Arc::clone(&uni), [(0, s.clone())])?;
        let l = CompactSet::new(Arc::clone(&uni), [(0, s), (m, t)])?;
        let lv = open_levels(&mut r, 2, 12);
        let fam = u_alpha_family(&k, &l, &lv)?;
        let gap = Scalar::to_f64(&(&lv[1] - &lv[0]));
        let (_, min) = mean_trace(e, &sys, &fam[0], &fam[1], p.horizon)?;
        worst = worst.min(min - gap);
        case1.push(json!({"beta": lv[0].to_string(), "alpha": lv[1].to_string(), "min": min}));
    }
    rep.claim(
        "case1-separation",
        worst >= -1e-9,
        [("min_margin", json!(worst)), ("instances", json!(case1))],
    );

    // (iii) matching level images
    let origin = (0u64, int(0));
    let u = StepFuzzySet::from_pairs(Arc::clone(&uni), [(origin.clone(), int(1))])?;
    let mut pairs = vec![StepFuzzySet::from_pairs(Arc::clone(&uni), [(origin.clone(), int(1)), ((0, int(1)), rat(1, 2))])?];
    for _ in 0..p.instances {
        let s = steps[r.gen_range(1..steps.len())].clone();
        let g = open_levels(&mut r, 1, 12).remove(0);
        pairs.push(StepFuzzySet::from_pairs(Arc::clone(&uni), [(origin.clone(), int(1)), ((0, s), g)])?);
    }
    let means: Vec<f64> = pairs
        .par_iter()
        .map(|v| mean_trace(e, &sys, &u, v, p.horizon).map(|x| x.0))
        .collect::<Result<_>>()?;
    let top = means.iter().copied().fold(0.0, f64::max);
    rep.claim(
        "case2-decay",
        top <= 0.01,
        [("largest_mean", json!(top)), ("means", json!(means)), ("horizon", json!(p.horizon))],
    );
    Ok(rep)
}

#[derive(Debug, Clone)]
pub struct Example3Params {
    pub horizon: usize,
    pub depth: u32,
    pub family: usize,
    pub trials: usize,
    pub iso_horizon: usize,
    pub seed: u64,
}

impl Default for Example3Params {
    fn default() -> Self {
        Example3Params {
            horizon: 1 << 14,
            depth: 7,
            family: 4,
            trials: 100,
            iso_horizon: 32,
            seed: 0,
        }
    }
}

/// `(j, d_E(u,v), d_E(f̂^j u, f̂^j v))` for the first `j ≤ horizon` where they differ.
pub fn isometry_defect<U: Universe>(
    sys: &System<U>,
    u: &StepFuzzySet<U>,
    v: &StepFuzzySet<U>,
    horizon: usize,
) -> Result<Option<(usize, U::Scalar, U::Scalar)>> {
    let d0 = fuzzy_distance(MetricKind::Endograph, u, v)?;
    let (mut a, mut b) = (u.clone(), v.clone());
    for j in 1..=horizon {
        a = zadeh_apply(sys, &a);
        b = zadeh_apply(sys, &b);
        let dj = fuzzy_distance(MetricKind::Endograph, &a, &b)?;
        if dj != d0 {
            return Ok(Some((j, d0, dj)));
        }
    }
    Ok(None)
}

pub fn verify_example3(p: &Example3Params) -> Result<Report> {
    if p.trials == 0 {
        return Err(precondition("trials must be positive".into()));
    }
    if p.family < 2 {
        return Err(Error::Config("family needs two points".into()));
    }
    let a: Arc<dyn DensitySet> = Arc::new(DoublingBlocks);
    let sys = build_example3_system(a)?;
    let uni = Arc::clone(sys.universe());
    let mut rep = Report::new("example3", Some(p.seed));
    let sched = checkpoint_schedule(p.horizon, p.depth, &example_checkpoints(3, p.horizon));
    let grid = default_grid();
    let cfg = example_classifier(3);

    // (i) base family, δ ∈ (1,2)
    let fam: Vec<Element<_>> = unit_steps(p.family as i64).into_iter().map(|t| Element::Point((0, t))).collect();
    let mat = scrambled_matrix(Level::Base, &sys, &fam, p.horizon, &grid, &sched, &cfg)?;
    let base = profile_of(Level::Base, &sys, &fam[0], &fam[1], p.horizon, &grid, &sched)?;
    let g = base.index_of(&rat(3, 2)).expect("3/2 is a grid value");
    let (lower, upper) = (base.phi_lower(g), base.phi_upper(g));
    rep.claim(
        "base-d3",
        mat.all("d3") && (lower - 1.0 / 3.0).abs() <= 0.05 && (upper - 2.0 / 3.0).abs() <= 0.05,
        [
            ("d3_pairs", json!(format!("{}/{}", mat.counts["d3"], mat.pair_count()))),
            ("phi_lower", json!(lower)),
            ("phi_upper", json!(upper)),
            ("checkpoints", json!(base.checkpoints)),
        ],
    );
    rep.table("example3_base_profile", profile_csv(&base, p.seed)?);
    rep.table("example3_matrix", matrix_csv(&mat, p.seed)?);

    // (ii) endograph isometry
    let pool: Vec<(u64, Rational)> = (0..6u64).flat_map(|n| unit_steps(5).into_iter().map(move |t| (n, t))).collect();
    let defects: Vec<String> = (0..p.trials)
        .into_par_iter()
        .map(|t| -> Result<Option<String>> {
            let mut r = substream(p.seed, t as u64);
            let u = fuzzy_from(&mut r, &uni, &pool, 4, 5);
            let v = fuzzy_from(&mut r, &uni, &pool, 4, 5);
            Ok(isometry_defect(&sys, &u, &v, p.iso_horizon)?
                .map(|(j, d0, dj)| format!("trial {t}: j={j} {d0} -> {dj}")))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let fixed_u = StepFuzzySet::from_pairs(Arc::clone(&uni), [((0, int(0)), int(1))])?;
    let fixed_v = StepFuzzySet::from_pairs(Arc::clone(&uni), [((0, int(0)), rat(1, 3)), ((0, int(1)), int(1))])?;
    let fixed = fuzzy_distance(MetricKind::Endograph, &fixed_u, &fixed_v)?;
    let fixed_ok = isometry_defect(&sys, &fixed_u, &fixed_v, p.iso_horizon)?.is_none() && fixed == int(1);
    rep.claim(
        "endograph-isometry",
        defects.is_empty() && fixed_ok,
        [
            ("trials", json!(p.trials)),
            ("steps", json!(p.iso_horizon)),
            ("defects", json!(defects)),
            ("fixed_pair_distance", json!(fixed.to_string())),
        ],
    );
    Ok(rep)
}
