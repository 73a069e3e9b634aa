//! Finite-horizon pair classification. Each pair type is a [`PairCriterion`]
//! strategy; [`CriterionRegistry::standard`] holds the built-in ones.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::scalar::{int, rat, Rational, Scalar};

use super::profile::DistributionalProfile;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifierConfig {
    /// ε for LY, MLY, D1, D2 and D2½.
    #[serde(with = "crate::scalar::rational_serde")]
    pub eps: Rational,
    /// `c` for D2½.
    #[serde(with = "crate::scalar::rational_serde")]
    pub c: Rational,
    /// `(a, b)` window for D3.
    #[serde(with = "crate::scalar::rational_serde")]
    pub window_lo: Rational,
    #[serde(with = "crate::scalar::rational_serde")]
    pub window_hi: Rational,
    pub prox_tol: f64,
    pub zero_tol: f64,
    pub one_tol: f64,
    pub sep_margin: f64,
    pub min_horizon: usize,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            eps: rat(1, 2),
            c: rat(1, 2),
            window_lo: int(1),
            window_hi: int(2),
            prox_tol: 1e-6,
            zero_tol: 0.15,
            one_tol: 0.15,
            sep_margin: 0.1,
            min_horizon: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlagStatus {
    True,
    False,
    InsufficientGrid,
}

#[derive(Debug, Clone, Serialize)]
pub struct Flag {
    pub name: String,
    pub status: FlagStatus,
    pub evidence: BTreeMap<String, f64>,
}

impl Flag {
    fn new(name: &str, holds: bool, evidence: impl IntoIterator<Item = (&'static str, f64)>) -> Self {
        Flag {
            name: name.into(),
            status: if holds { FlagStatus::True } else { FlagStatus::False },
            evidence: evidence.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        }
    }

    fn insufficient(name: &str, why: &'static str) -> Self {
        Flag {
            name: name.into(),
            status: FlagStatus::InsufficientGrid,
            evidence: BTreeMap::from([(why.to_string(), 0.0)]),
        }
    }

    pub fn holds(&self) -> bool {
        self.status == FlagStatus::True
    }
}

pub trait PairCriterion<S: Scalar>: Send + Sync {
    fn name(&self) -> &'static str;
    fn evaluate(&self, profile: &DistributionalProfile<S>, config: &ClassifierConfig) -> Flag;
}

fn eps_index<S: Scalar>(p: &DistributionalProfile<S>, eps: &Rational) -> Option<usize> {
    p.index_of(eps)
}

fn proximal<S: Scalar>(p: &DistributionalProfile<S>, cfg: &ClassifierConfig) -> bool {
    p.min_value.to_f64() <= cfg.prox_tol
}

/// `min_g Φ̂*(δ_g)` and whether it clears `1 - one_tol`.
fn upper_everywhere<S: Scalar>(p: &DistributionalProfile<S>, cfg: &ClassifierConfig) -> (f64, bool) {
    let m = (0..p.grid.len()).map(|g| p.phi_upper(g)).fold(f64::INFINITY, f64::min);
    (m, m >= 1.0 - cfg.one_tol)
}

pub struct Proximal;
pub struct LiYorke;
pub struct MeanLiYorke;
pub struct Distributional1;
pub struct Distributional1Half;
pub struct Distributional2;
pub struct Distributional2Half;
pub struct Distributional3;

impl<S: Scalar> PairCriterion<S> for Proximal {
    fn name(&self) -> &'static str {
        "proximal"
    }
    fn evaluate(&self, p: &DistributionalProfile<S>, cfg: &ClassifierConfig) -> Flag {
        Flag::new(
            PairCriterion::<S>::name(self),
            proximal(p, cfg),
            [("min", p.min_value.to_f64()), ("argmin", p.min_index as f64)],
        )
    }
}

impl<S: Scalar> PairCriterion<S> for LiYorke {
    fn name(&self) -> &'static str {
        "ly"
    }
    fn evaluate(&self, p: &DistributionalProfile<S>, cfg: &ClassifierConfig) -> Flag {
        let eps = S::from_rational(&cfg.eps);
        let far = eps.le_tol(&p.tail_max);
        Flag::new(
            PairCriterion::<S>::name(self),
            proximal(p, cfg) && far,
            [("min", p.min_value.to_f64()), ("tail_max", p.tail_max.to_f64())],
        )
    }
}

impl<S: Scalar> PairCriterion<S> for MeanLiYorke {
    fn name(&self) -> &'static str {
        "mly"
    }
    fn evaluate(&self, p: &DistributionalProfile<S>, cfg: &ClassifierConfig) -> Flag {
        let (lo, hi) = p.tail_means();
        let eps = cfg.eps.to_f64();
        Flag::new(
            PairCriterion::<S>::name(self),
            lo <= cfg.zero_tol && hi >= eps - crate::scalar::FLOAT_TOL,
            [("tail_mean_min", lo), ("tail_mean_max", hi)],
        )
    }
}

impl<S: Scalar> PairCriterion<S> for Distributional1 {
    fn name(&self) -> &'static str {
        "d1"
    }
    fn evaluate(&self, p: &DistributionalProfile<S>, cfg: &ClassifierConfig) -> Flag {
        let Some(g) = eps_index(p, &cfg.eps) else {
            return Flag::insufficient(PairCriterion::<S>::name(self), "eps_not_in_grid");
        };
        let lower = p.phi_lower(g);
        let (upper, upper_ok) = upper_everywhere(p, cfg);
        Flag::new(
            PairCriterion::<S>::name(self),
            lower <= cfg.zero_tol && upper_ok,
            [("phi_lower_eps", lower), ("min_phi_upper", upper)],
        )
    }
}

impl<S: Scalar> PairCriterion<S> for Distributional1Half {
    fn name(&self) -> &'static str {
        "d1half"
    }
    fn evaluate(&self, p: &DistributionalProfile<S>, cfg: &ClassifierConfig) -> Flag {
        let lower = p.phi_lower(0);
        let (upper, upper_ok) = upper_everywhere(p, cfg);
        Flag::new(
            PairCriterion::<S>::name(self),
            lower <= cfg.zero_tol && upper_ok,
            [("phi_lower_smallest_delta", lower), ("min_phi_upper", upper)],
        )
    }
}

impl<S: Scalar> PairCriterion<S> for Distributional2 {
    fn name(&self) -> &'static str {
        "d2"
    }
    fn evaluate(&self, p: &DistributionalProfile<S>, cfg: &ClassifierConfig) -> Flag {
        let Some(g) = eps_index(p, &cfg.eps) else {
            return Flag::insufficient(PairCriterion::<S>::name(self), "eps_not_in_grid");
        };
        let eps = cfg.eps.to_f64();
        let lower = p.phi_lower(g);
        let (upper, upper_ok) = upper_everywhere(p, cfg);
        let in_range = cfg.eps > int(0) && cfg.eps <= int(1);
        Flag::new(
            PairCriterion::<S>::name(self),
            in_range && lower <= 1.0 - eps && upper_ok,
            [("phi_lower_eps", lower), ("min_phi_upper", upper)],
        )
    }
}

impl<S: Scalar> PairCriterion<S> for Distributional2Half {
    fn name(&self) -> &'static str {
        "d2half"
    }
    fn evaluate(&self, p: &DistributionalProfile<S>, cfg: &ClassifierConfig) -> Flag {
        let window: Vec<usize> = (0..p.grid.len()).filter(|g| p.grid[*g] <= cfg.eps).collect();
        if window.is_empty() {
            return Flag::insufficient(PairCriterion::<S>::name(self), "no_delta_below_eps");
        }
        let c = cfg.c.to_f64();
        let max_lower = window.iter().map(|g| p.phi_lower(*g)).fold(f64::NEG_INFINITY, f64::max);
        let min_upper = window.iter().map(|g| p.phi_upper(*g)).fold(f64::INFINITY, f64::min);
        Flag::new(
            PairCriterion::<S>::name(self),
            max_lower < c && c < min_upper,
            [("max_phi_lower", max_lower), ("min_phi_upper", min_upper)],
        )
    }
}

impl<S: Scalar> PairCriterion<S> for Distributional3 {
    fn name(&self) -> &'static str {
        "d3"
    }
    fn evaluate(&self, p: &DistributionalProfile<S>, cfg: &ClassifierConfig) -> Flag {
        let window: Vec<usize> = (0..p.grid.len())
            .filter(|g| cfg.window_lo < p.grid[*g] && p.grid[*g] < cfg.window_hi)
            .collect();
        if window.is_empty() {
            return Flag::insufficient(PairCriterion::<S>::name(self), "no_delta_in_window");
        }
        let gap = window
            .iter()
            .map(|g| p.phi_upper(*g) - p.phi_lower(*g))
            .fold(f64::INFINITY, f64::min);
        Flag::new(PairCriterion::<S>::name(self), gap >= cfg.sep_margin, [("min_separation", gap)])
    }
}

pub struct CriterionRegistry<S: Scalar> {
    criteria: Vec<Box<dyn PairCriterion<S>>>,
}

impl<S: Scalar> Default for CriterionRegistry<S> {
    fn default() -> Self {
        Self::standard()
    }
}

impl<S: Scalar> CriterionRegistry<S> {
    pub fn empty() -> Self {
        CriterionRegistry { criteria: Vec::new() }
    }

    pub fn standard() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Proximal));
        r.register(Box::new(LiYorke));
        r.register(Box::new(MeanLiYorke));
        r.register(Box::new(Distributional1));
        r.register(Box::new(Distributional1Half));
        r.register(Box::new(Distributional2));
        r.register(Box::new(Distributional2Half));
        r.register(Box::new(Distributional3));
        r
    }

    /// Adds a criterion, replacing any registered under the same name.
    pub fn register(&mut self, criterion: Box<dyn PairCriterion<S>>) {
        self.criteria.retain(|c| c.name() != criterion.name());
        self.criteria.push(criterion);
    }

    pub fn find(&self, name: &str) -> Option<&dyn PairCriterion<S>> {
        self.criteria.iter().find(|c| c.name() == name).map(|c| c.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.criteria.iter().map(|c| c.name()).collect()
    }

    pub fn classify(&self, profile: &DistributionalProfile<S>, config: &ClassifierConfig) -> Result<PairVerdict> {
        if profile.horizon < config.min_horizon {
            return domain(format!(
                "horizon {} below the configured minimum {}",
                profile.horizon, config.min_horizon
            ));
        }
        Ok(PairVerdict {
            horizon: profile.horizon,
            config: config.clone(),
            flags: self.criteria.iter().map(|c| c.evaluate(profile, config)).collect(),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PairVerdict {
    pub horizon: usize,
    pub config: ClassifierConfig,
    pub flags: Vec<Flag>,
}

impl PairVerdict {
    pub fn flag(&self, name: &str) -> Option<&Flag> {
        self.flags.iter().find(|f| f.name == name)
    }

    /// Whether the named flag is set; unknown names count as unset.
    pub fn holds(&self, name: &str) -> bool {
        self.flag(name).is_some_and(Flag::holds)
    }

    pub fn evidence(&self, name: &str, key: &str) -> Option<f64> {
        self.flag(name).and_then(|f| f.evidence.get(key).copied())
    }
}

pub fn classify_pair<S: Scalar>(profile: &DistributionalProfile<S>, config: &ClassifierConfig) -> Result<PairVerdict> {
    CriterionRegistry::standard().classify(profile, config)
}
