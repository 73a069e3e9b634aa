//! The three pair-universe counterexamples and the weighted backward shift,
//! with claim-checking routines producing [`Report`]s.

pub mod shift;
pub mod universes;
pub mod verify;

use std::sync::Arc;

use serde::Deserialize;

use crate::chaos::ClassifierConfig;
use crate::error::{Error, Result};
use crate::report::Report;
use crate::scalar::{int, Rational};
use crate::spaces::density::{DensityKind, DensitySet};
use crate::spaces::System;

pub use shift::{shift_demo, ShiftParams};
pub use universes::{shift_first, Example1Universe, Example2Universe, Example3Universe};
pub use verify::{verify_example1, verify_example2, verify_example3, Example1Params, Example2Params, Example3Params};

fn require(which: u8, a: &dyn DensitySet, want: DensityKind) -> Result<()> {
    if a.kind() == want {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "example {which} needs A of kind {want:?}, got {:?}",
            a.kind()
        )))
    }
}

pub fn build_example1_system(a: Arc<dyn DensitySet>) -> Result<System<Example1Universe>> {
    require(1, a.as_ref(), DensityKind::FactorialBlocks)?;
    Ok(System::new(Arc::new(Example1Universe { a }), "shift-first", shift_first))
}

pub fn build_example2_system(a: Arc<dyn DensitySet>) -> Result<System<Example2Universe>> {
    require(2, a.as_ref(), DensityKind::SquaredExponents)?;
    Ok(System::new(Arc::new(Example2Universe { a }), "shift-first", shift_first))
}

pub fn build_example3_system(a: Arc<dyn DensitySet>) -> Result<System<Example3Universe>> {
    require(3, a.as_ref(), DensityKind::DoublingBlocks)?;
    Ok(System::new(Arc::new(Example3Universe { a }), "shift-first", shift_first))
}

pub enum ExampleSystem {
    One(System<Example1Universe>),
    Two(System<Example2Universe>),
    Three(System<Example3Universe>),
}

pub fn build_example(which: u8, a: Arc<dyn DensitySet>) -> Result<ExampleSystem> {
    match which {
        1 => build_example1_system(a).map(ExampleSystem::One),
        2 => build_example2_system(a).map(ExampleSystem::Two),
        3 => build_example3_system(a).map(ExampleSystem::Three),
        _ => Err(Error::Config(format!("no example {which}"))),
    }
}

/// Block edges `4^m - 1` and `2·4^m - 1` up to `n`.
pub fn doubling_block_edges(n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 1usize;
    while p - 1 <= n {
        for e in [p.saturating_sub(1), 2 * p - 1] {
            if (1..=n).contains(&e) {
                out.push(e);
            }
        }
        p = p.saturating_mul(4);
    }
    out
}

/// Elements of `A = {2^{k²}}` and their predecessors up to `n`.
pub fn squared_exponent_edges(n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for k in 1u32..=7 {
        let e = k * k;
        if e >= usize::BITS {
            break;
        }
        let a = 1usize << e;
        out.extend([a - 1, a].into_iter().filter(|m| (1..=n).contains(m)));
    }
    out
}

/// Classifier settings for the base pairs of each example.
pub fn example_classifier(which: u8) -> ClassifierConfig {
    match which {
        2 => ClassifierConfig { eps: int(1), ..Default::default() },
        3 => ClassifierConfig {
            window_lo: int(1),
            window_hi: int(2),
            sep_margin: 0.2,
            ..Default::default()
        },
        _ => ClassifierConfig::default(),
    }
}

/// Structural checkpoints of each example up to `horizon`.
pub fn example_checkpoints(which: u8, horizon: usize) -> Vec<usize> {
    match which {
        1 => [5039, 40320, 362_879].into_iter().filter(|c| *c <= horizon).collect(),
        2 => squared_exponent_edges(horizon),
        3 => doubling_block_edges(horizon),
        _ => Vec::new(),
    }
}

/// Knobs shared by the gallery entries; each entry reads what it needs.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GalleryParams {
    pub horizon: Option<usize>,
    pub checkpoints: Option<Vec<usize>>,
    pub trials: Option<usize>,
    pub alphas: Option<usize>,
    #[serde(with = "crate::scalar::rational_serde::option")]
    pub weight: Option<Rational>,
    pub seed: u64,
}

pub trait GalleryEntry: Send + Sync {
    fn name(&self) -> &'static str;
    fn run(&self, params: &GalleryParams) -> Result<Report>;
}

struct Example1Entry;
struct Example2Entry;
struct Example3Entry;
struct ShiftEntry;

impl GalleryEntry for Example1Entry {
    fn name(&self) -> &'static str {
        "example1"
    }
    fn run(&self, p: &GalleryParams) -> Result<Report> {
        let mut q = Example1Params { seed: p.seed, ..Default::default() };
        if let Some(h) = p.horizon {
            q.horizon = h;
            q.fuzzy_horizon = h;
            q.checkpoints.retain(|c| *c <= h);
        }
        if let Some(c) = &p.checkpoints {
            q.checkpoints = c.clone();
        }
        if let Some(a) = p.alphas {
            q.alphas = a;
        }
        if let Some(t) = p.trials {
            q.samples = t;
        }
        verify_example1(&q)
    }
}

impl GalleryEntry for Example2Entry {
    fn name(&self) -> &'static str {
        "example2"
    }
    fn run(&self, p: &GalleryParams) -> Result<Report> {
        let mut q = Example2Params { seed: p.seed, ..Default::default() };
        if let Some(h) = p.horizon {
            q.horizon = h;
        }
        if let Some(t) = p.trials {
            q.instances = t;
        }
        verify_example2(&q)
    }
}

impl GalleryEntry for Example3Entry {
    fn name(&self) -> &'static str {
        "example3"
    }
    fn run(&self, p: &GalleryParams) -> Result<Report> {
        let mut q = Example3Params { seed: p.seed, ..Default::default() };
        if let Some(h) = p.horizon {
            q.horizon = h;
        }
        if let Some(t) = p.trials {
            q.trials = t;
        }
        verify_example3(&q)
    }
}

impl GalleryEntry for ShiftEntry {
    fn name(&self) -> &'static str {
        "shift"
    }
    fn run(&self, p: &GalleryParams) -> Result<Report> {
        let mut q = ShiftParams { seed: p.seed, ..Default::default() };
        if let Some(w) = &p.weight {
            q.weight = w.clone();
        }
        if let Some(h) = p.horizon {
            q.horizon = h;
        }
        if let Some(t) = p.trials {
            q.samples = t;
        }
        shift_demo(&q)
    }
}

/// Gallery entries by name.
pub struct Gallery {
    entries: Vec<Box<dyn GalleryEntry>>,
}

impl Gallery {
    pub fn standard() -> Self {
        Gallery {
            entries: vec![Box::new(Example1Entry), Box::new(Example2Entry), Box::new(Example3Entry), Box::new(ShiftEntry)],
        }
    }

    pub fn register(&mut self, e: Box<dyn GalleryEntry>) {
        self.entries.retain(|x| x.name() != e.name());
        self.entries.push(e);
    }

    pub fn find(&self, name: &str) -> Option<&dyn GalleryEntry> {
        self.entries.iter().find(|e| e.name() == name).map(|e| e.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }
}
