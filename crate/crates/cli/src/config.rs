//! Experiment settings gathered from flags, then overridden by a TOML file.

use std::path::{Path, PathBuf};

use fuzzdyn::spaces::config::{RationalText, UniverseConfig};
use fuzzdyn::{Error, Rational, Result};
use serde::Deserialize;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub horizon: Option<usize>,
    pub trials: Option<usize>,
    pub which: Option<String>,
    pub example: Option<String>,
    pub level: Option<String>,
    pub alphas: Option<Vec<RationalText>>,
    pub levels: Option<usize>,
    #[serde(with = "fuzzdyn::scalar::rational_serde::option")]
    pub eps: Option<Rational>,
    #[serde(with = "fuzzdyn::scalar::rational_serde::option")]
    pub delta: Option<Rational>,
    #[serde(with = "fuzzdyn::scalar::rational_serde::option")]
    pub weight: Option<Rational>,
    pub checkpoints: Option<Vec<usize>>,
    pub left: Option<String>,
    pub right: Option<String>,
    pub expect: Option<Vec<String>>,
    pub cells: Option<usize>,
    pub min_fraction: Option<f64>,
    pub trace: Option<bool>,
    pub universe: Option<UniverseConfig>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident, $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f; } )*
    };
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `file` replace the flag values.
    pub fn overridden_by(mut self, file: ExperimentConfig) -> Self {
        overlay!(
            self, file, seed, out, horizon, trials, which, example, level, alphas, levels, eps, delta, weight,
            checkpoints, left, right, expect, cells, min_fraction, trace, universe
        );
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == Some(0) {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        if let Some(c) = &self.checkpoints {
            if c.windows(2).any(|w| w[0] >= w[1]) || c.first() == Some(&0) {
                return Err(Error::Config("checkpoints must be positive and strictly increasing".into()));
            }
        }
        if let Some(a) = &self.alphas {
            if a.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(Error::Config("alphas must be strictly increasing".into()));
            }
        }
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn alphas(&self) -> Vec<Rational> {
        self.alphas.iter().flatten().map(|a| a.0.clone()).collect()
    }
}
