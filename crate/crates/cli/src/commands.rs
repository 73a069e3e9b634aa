use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use anyhow::Context;
use fuzzdyn::chaos::io::{means_csv, profile_csv, trace_csv, transfer_csv};
use fuzzdyn::chaos::profile::grid_with;
use fuzzdyn::chaos::{
    checkpoint_schedule, classify_pair, default_grid, for_each_distance, transfer_check, DistanceTrace, Element, Level,
    ProfileBuilder,
};
use fuzzdyn::fuzzy::suite::{identity_suite, level_bounds_suite};
use fuzzdyn::gallery::universes::unit_steps;
use fuzzdyn::gallery::{example_checkpoints, example_classifier, ExampleSystem, Gallery, GalleryParams};
use fuzzdyn::proxsens::generators::{binary_flip, pair_steps, second_coordinate_moves, BasisPerturbation, CandidateGenerator};
use fuzzdyn::proxsens::sensitivity_search;
use fuzzdyn::report::Report;
use fuzzdyn::sampling::rng;
use fuzzdyn::scalar::{int, rat};
use fuzzdyn::spaces::config::{BuiltSystem, UniverseConfig};
use fuzzdyn::spaces::sequence::ShiftVector;
use fuzzdyn::{CompactSet, Error, Rational, Result, StepFuzzySet, System, Universe};
use rand::Rng;
use serde_json::json;

use crate::config::ExperimentConfig;

macro_rules! dispatch {
    ($built:expr, $sys:ident => $body:expr) => {
        match $built {
            BuiltSystem::Example(ExampleSystem::One($sys)) => $body,
            BuiltSystem::Example(ExampleSystem::Two($sys)) => $body,
            BuiltSystem::Example(ExampleSystem::Three($sys)) => $body,
            BuiltSystem::Shift($sys) => $body,
            BuiltSystem::Line($sys) => $body,
        }
    };
}

pub enum Command {
    Metrics,
    Classify,
    Transfer,
    Example,
    Shift,
    Prox,
    Sens,
}

pub fn run(cmd: Command, c: &ExperimentConfig) -> Result<Report> {
    match cmd {
        Command::Metrics => metrics(c),
        Command::Classify => {
            let (built, which) = system_for(c)?;
            dispatch!(built, sys => classify(&sys, which, c))
        }
        Command::Transfer => {
            let (built, which) = system_for(c)?;
            dispatch!(built, sys => transfer(&sys, which, c))
        }
        Command::Example => example(c),
        Command::Shift => gallery_entry("shift", c),
        Command::Prox => prox(c),
        Command::Sens => sens(c),
    }
}

/// Prints the report and, with `out`, writes it and its tables there.
pub fn emit(report: &Report, out: Option<&Path>) -> anyhow::Result<()> {
    let body = report.to_json();
    let mut stdout = std::io::stdout().lock();
    match writeln!(stdout, "{body}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e).context("writing stdout"),
        _ => {}
    }
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = dir.join(format!("{}.json", report.name));
        std::fs::write(&path, format!("{body}\n")).with_context(|| format!("writing {}", path.display()))?;
        for (stem, csv) in &report.tables {
            let path = dir.join(format!("{stem}.csv"));
            std::fs::write(&path, csv).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(())
}

/// The system named by `--example` (or `[universe]`) and its example number.
fn system_for(c: &ExperimentConfig) -> Result<(BuiltSystem, Option<u8>)> {
    let cfg = match &c.universe {
        Some(u) => u.clone(),
        None => match c.example.as_deref().unwrap_or("1") {
            "1" => UniverseConfig::Example1 { a: None },
            "2" => UniverseConfig::Example2 { a: None },
            "3" => UniverseConfig::Example3 { a: None },
            "shift" => UniverseConfig::Shift { weight: c.weight.clone().unwrap_or(int(2)) },
            other => return Err(Error::Config(format!("unknown example {other:?}; expected 1, 2, 3 or shift"))),
        },
    };
    let which = match cfg {
        UniverseConfig::Example1 { .. } => Some(1),
        UniverseConfig::Example2 { .. } => Some(2),
        UniverseConfig::Example3 { .. } => Some(3),
        _ => None,
    };
    Ok((cfg.build()?, which))
}

/// Default left and right points (`;`-separated lists) for each universe kind.
fn default_points<U: Universe>(sys: &System<U>, set_mode: bool) -> (&'static str, &'static str) {
    use fuzzdyn::spaces::PointKind as K;
    let (zero, other) = match sys.universe().kind() {
        K::FinitelySupportedRationalSequence => ("[]", "[3:1]"),
        K::FiniteEnumerated => ("0", "1"),
        _ => ("(0,0)", "(0,1)"),
    };
    if !set_mode {
        return (zero, other);
    }
    match sys.universe().kind() {
        K::FinitelySupportedRationalSequence => ("[]", "[];[3:1]"),
        K::FiniteEnumerated => ("0", "0;1"),
        _ => ("(0,0)", "(0,0);(0,1)"),
    }
}

fn parse_points<U: Universe>(u: &U, text: &str) -> Result<Vec<U::Point>> {
    text.split(';').map(|p| u.parse_point(p.trim())).collect()
}

/// A point, its singleton, or the indicator of its singleton.
fn lift<U: Universe>(level: Level, u: &Arc<U>, pts: Vec<U::Point>) -> Result<Element<U>> {
    match level {
        Level::Base => match <[U::Point; 1]>::try_from(pts) {
            Ok([p]) => Ok(Element::Point(p)),
            Err(_) => Err(Error::Config("the base level takes one point per side".into())),
        },
        Level::Hyper => Ok(Element::Set(CompactSet::new(Arc::clone(u), pts)?)),
        Level::Fuzzy(_) => Ok(Element::Fuzzy(StepFuzzySet::indicator(&CompactSet::new(Arc::clone(u), pts)?))),
    }
}

fn classify<U: Universe>(sys: &System<U>, which: Option<u8>, c: &ExperimentConfig) -> Result<Report> {
    let u = sys.universe();
    let level: Level = c.level.as_deref().unwrap_or("base").parse()?;
    let (l0, r0) = default_points(sys, false);
    let left = lift(level, u, parse_points(u.as_ref(), c.left.as_deref().unwrap_or(l0))?)?;
    let right = lift(level, u, parse_points(u.as_ref(), c.right.as_deref().unwrap_or(r0))?)?;
    let horizon = c.horizon.unwrap_or(10_000);
    let which = which.unwrap_or(0);
    let mut cfg = example_classifier(which);
    if let Some(e) = &c.eps {
        cfg.eps = e.clone();
    }
    let grid = grid_with(&default_grid(), &[cfg.eps.clone(), cfg.window_lo.clone(), cfg.window_hi.clone()]);
    let mut structural = c.checkpoints.clone().unwrap_or_else(|| example_checkpoints(which, horizon));
    structural.retain(|x| *x <= horizon);
    let sched = checkpoint_schedule(horizon, 7, &structural);

    let keep = c.trace.unwrap_or(false);
    let mut pb = ProfileBuilder::new(horizon, &grid, &sched)?;
    let mut values = Vec::new();
    for_each_distance(level, sys, &left, &right, horizon, |_, d| {
        pb.push(&d);
        if keep {
            values.push(d);
        }
    })?;
    let profile = pb.finish()?;
    let verdict = classify_pair(&profile, &cfg)?;

    let seed = c.seed();
    let mut rep = Report::new("pair-classify", Some(seed));
    for flag in c.expect.iter().flatten() {
        let f = verdict.flag(flag).ok_or_else(|| Error::Config(format!("unknown flag {flag:?}")))?;
        rep.claim(format!("expect-{flag}"), f.holds(), [("status", json!(f.status))]);
    }
    let desc = |e: &Element<U>| e.describe(u.as_ref());
    rep.detail("universe", json!(u.id()));
    rep.detail("level", json!(level));
    rep.detail("left", json!(desc(&left)));
    rep.detail("right", json!(desc(&right)));
    rep.detail("summary", serde_json::to_value(profile.summary()).map_err(|e| Error::Io(e.to_string()))?);
    rep.detail("verdict", serde_json::to_value(&verdict).map_err(|e| Error::Io(e.to_string()))?);
    rep.table("profile", profile_csv(&profile, seed)?);
    rep.table("means", means_csv(&profile, seed)?);
    if keep {
        let trace = DistanceTrace { level, left: desc(&left), right: desc(&right), values };
        rep.table("trace", trace_csv(&trace, seed)?);
    }
    Ok(rep)
}

fn transfer<U: Universe>(sys: &System<U>, _which: Option<u8>, c: &ExperimentConfig) -> Result<Report> {
    let u = sys.universe();
    let (l0, r0) = default_points(sys, true);
    let k = CompactSet::new(Arc::clone(u), parse_points(u.as_ref(), c.left.as_deref().unwrap_or(l0))?)?;
    let l = CompactSet::new(Arc::clone(u), parse_points(u.as_ref(), c.right.as_deref().unwrap_or(r0))?)?;
    let alphas = match c.alphas() {
        a if a.is_empty() => vec![rat(1, 3), rat(2, 3)],
        a => a,
    };
    let [beta, alpha] = <[Rational; 2]>::try_from(alphas).map_err(|_| Error::Config("--alphas takes β,α".into()))?;
    let horizon = c.horizon.unwrap_or(64);
    let t = transfer_check(sys, &k, &l, &alpha, &beta, horizon)?;
    let seed = c.seed();
    let mut rep = Report::new("transfer", Some(seed));
    rep.claim(
        "transfer-exact",
        t.exact,
        [
            ("max_discrepancy", json!(t.max_discrepancy)),
            ("alpha", json!(alpha.to_string())),
            ("beta", json!(beta.to_string())),
            ("horizon", json!(horizon)),
        ],
    );
    rep.detail("universe", json!(u.id()));
    rep.detail("k", json!(k.display()));
    rep.detail("l", json!(l.display()));
    rep.table("transfer", transfer_csv(&t, seed)?);
    Ok(rep)
}

fn metrics(c: &ExperimentConfig) -> Result<Report> {
    let trials = c.trials.unwrap_or(1000);
    let seed = c.seed();
    let mut rep = Report::new("metrics", Some(seed));
    for suite in [identity_suite(seed, trials), level_bounds_suite(seed, trials)] {
        for (check, evaluated) in &suite.checks {
            let bad: Vec<_> = suite.violations.iter().filter(|v| v.check == *check).collect();
            rep.claim(
                format!("{}:{check}", suite.name),
                bad.is_empty(),
                [
                    ("evaluated", json!(evaluated)),
                    ("violations", json!(bad.len())),
                    ("first", json!(bad.iter().take(5).collect::<Vec<_>>())),
                ],
            );
        }
        rep.detail(format!("{}_trials", suite.name), json!(suite.trials));
    }
    Ok(rep)
}

fn gallery_entry(name: &str, c: &ExperimentConfig) -> Result<Report> {
    let g = Gallery::standard();
    let entry = g
        .find(name)
        .ok_or_else(|| Error::Config(format!("unknown gallery entry {name:?}; known: {}", g.names().join(", "))))?;
    let p = GalleryParams {
        horizon: c.horizon,
        checkpoints: c.checkpoints.clone(),
        trials: c.trials,
        alphas: c.levels,
        weight: c.weight.clone(),
        seed: c.seed(),
    };
    entry.run(&p)
}

fn example(c: &ExperimentConfig) -> Result<Report> {
    let which = c.which.as_deref().ok_or_else(|| Error::Config("--which is required".into()))?;
    match which {
        "1" | "2" | "3" => gallery_entry(&format!("example{which}"), c),
        other => Err(Error::Config(format!("unknown example {other:?}; expected 1, 2 or 3"))),
    }
}

fn coverage<U: Universe>(
    sys: &System<U>,
    mesh: Vec<(U::Point, U::Point)>,
    generator: &dyn CandidateGenerator<U>,
    c: &ExperimentConfig,
) -> Result<Report> {
    let eps = c.eps.clone().unwrap_or(rat(1, 2));
    let horizon = c.horizon.unwrap_or(200);
    let mesh: Vec<_> = mesh.into_iter().map(|(x, y)| (Element::Point(x), Element::Point(y))).collect();
    let cov = fuzzdyn::proxsens::proximal_coverage(Level::Base, sys, &mesh, generator, &eps, horizon, 1e-6)?;
    let want = c.min_fraction.unwrap_or(0.0);
    let mut rep = Report::new("prox-sample", Some(c.seed()));
    rep.claim(
        "coverage",
        cov.fraction >= want,
        [("fraction", json!(cov.fraction)), ("min_fraction", json!(want)), ("covered", json!(cov.covered))],
    );
    rep.detail("universe", json!(sys.universe().id()));
    rep.detail("generator", json!(generator.name()));
    rep.detail("eps", json!(eps.to_string()));
    rep.detail("cells", serde_json::to_value(&cov.cells).map_err(|e| Error::Io(e.to_string()))?);
    Ok(rep)
}

fn prox(c: &ExperimentConfig) -> Result<Report> {
    let cells = c.cells.unwrap_or(16);
    if cells == 0 {
        return Err(Error::Config("cells must be positive".into()));
    }
    let mut r = rng(c.seed());
    let (built, _) = system_for(c)?;
    match built {
        BuiltSystem::Example(ExampleSystem::One(sys)) => {
            let mut pt = || (r.gen_range(0..20u64), r.gen_range(0..2u8));
            let mesh = (0..cells).map(|_| (pt(), pt())).collect();
            coverage(&sys, mesh, &binary_flip(), c)
        }
        BuiltSystem::Example(ExampleSystem::Three(sys)) => {
            let steps = unit_steps(5);
            let mut pt = || (r.gen_range(0..20u64), steps[r.gen_range(0..steps.len())].clone());
            let mesh = (0..cells).map(|_| (pt(), pt())).collect();
            coverage(&sys, mesh, &second_coordinate_moves(pair_steps()), c)
        }
        BuiltSystem::Shift(sys) => {
            let mut pt = || ShiftVector::from_pairs([(r.gen_range(0..6), rat(r.gen_range(-4..=4), 4))]);
            let mesh = (0..cells).map(|_| (pt(), pt())).collect();
            coverage(&sys, mesh, &BasisPerturbation { max_index: 8 }, c)
        }
        _ => Err(Error::Config("prox sample supports examples 1, 3 and shift".into())),
    }
}

fn sens(c: &ExperimentConfig) -> Result<Report> {
    let weight = c.weight.clone().unwrap_or(int(2));
    let (BuiltSystem::Shift(sys), _) = system_for(&ExperimentConfig {
        example: Some("shift".into()),
        weight: Some(weight),
        universe: None,
        ..c.clone()
    })?
    else {
        unreachable!("shift requested")
    };
    let level: Level = c.level.as_deref().unwrap_or("base").parse()?;
    let eps = c.eps.clone().unwrap_or(int(1));
    let delta = c.delta.clone().unwrap_or(rat(1, 10));
    let horizon = c.horizon.unwrap_or(64);
    let center = lift(level, sys.universe(), vec![ShiftVector::zero()])?;
    let g = BasisPerturbation { max_index: horizon };
    let found = sensitivity_search(level, &sys, &center, &delta, &eps, horizon, &g)?;
    let valid = match &found {
        Some(w) => w.revalidate(&sys)?,
        None => false,
    };
    let mut rep = Report::new("sens-search", Some(c.seed()));
    rep.claim(
        "witness",
        valid,
        [("eps", json!(eps.to_string())), ("delta", json!(delta.to_string())), ("horizon", json!(horizon))],
    );
    rep.detail("witness", found.map_or(json!(null), |w| w.to_json(sys.universe().as_ref())));
    Ok(rep)
}
