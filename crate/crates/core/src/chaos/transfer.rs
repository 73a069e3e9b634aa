//! Two-level fuzzy families `u^α = max(χ_K, α χ_L)`, the reparametrization
//! `ξ_{α,β}`, and the check that their fuzzy distances follow the set distance.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::fuzzy::{fuzzy_distance, MetricKind, StepFuzzySet};
use crate::hyper::{hausdorff, hyper_apply, CompactSet};
use crate::scalar::{int, is_level, Rational, Scalar};
use crate::spaces::{System, Universe};

use super::Element;

fn check_nested<U: Universe>(k: &CompactSet<U>, l: &CompactSet<U>) -> Result<()> {
    if !k.is_subset(l) || k == l {
        return domain("K must be a proper subset of L");
    }
    Ok(())
}

fn check_open_level(a: &Rational) -> Result<()> {
    if !is_level(a) || *a == int(1) {
        return domain(format!("level {a} not in (0,1)"));
    }
    Ok(())
}

/// One `u^α` per entry of `alphas`; the levels must be distinct and in `(0,1)`.
pub fn u_alpha_family<U: Universe>(
    k: &CompactSet<U>,
    l: &CompactSet<U>,
    alphas: &[Rational],
) -> Result<Vec<StepFuzzySet<U>>> {
    check_nested(k, l)?;
    let mut seen = std::collections::BTreeSet::new();
    for a in alphas {
        check_open_level(a)?;
        if !seen.insert(a) {
            return domain(format!("level {a} repeated"));
        }
    }
    alphas
        .iter()
        .map(|a| StepFuzzySet::from_levels(&[(a.clone(), l.clone()), (int(1), k.clone())]))
        .collect()
}

/// The increasing map fixing 0 and 1 with `ξ(α) = β`, linear on `[0,α]` and `[α,1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct XiMap {
    pub alpha: Rational,
    pub beta: Rational,
}

pub fn xi_map(alpha: &Rational, beta: &Rational) -> Result<XiMap> {
    check_open_level(alpha)?;
    check_open_level(beta)?;
    if beta >= alpha {
        return domain("ξ needs β < α");
    }
    Ok(XiMap {
        alpha: alpha.clone(),
        beta: beta.clone(),
    })
}

impl XiMap {
    pub fn eval(&self, gamma: &Rational) -> Rational {
        let one = int(1);
        if *gamma <= self.alpha {
            gamma * &self.beta / &self.alpha
        } else {
            &self.beta + (gamma - &self.alpha) * (&one - &self.beta) / (&one - &self.alpha)
        }
    }

    /// `sup |ξ(γ) - γ|`, attained at `γ = α`.
    pub fn sup_deviation(&self) -> Rational {
        &self.alpha - &self.beta
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TransferRow {
    pub j: usize,
    pub hausdorff: String,
    pub values: BTreeMap<MetricKind, String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TransferReport {
    pub horizon: usize,
    #[serde(with = "crate::scalar::rational_serde")]
    pub alpha: Rational,
    #[serde(with = "crate::scalar::rational_serde")]
    pub beta: Rational,
    /// Largest `|ρ_j - expected_j|` per metric over `j = 0..=horizon`.
    pub max_discrepancy: BTreeMap<MetricKind, f64>,
    /// Every value matched its expected value (exactly on rational universes).
    pub exact: bool,
    pub rows: Vec<TransferRow>,
}

impl TransferReport {
    pub fn pass(&self) -> bool {
        self.exact
    }
}

/// Compares `ρ(f̂^j u^β, f̂^j u^α)` against `d_H(f̄^j K, f̄^j L)` (sup metric) and
/// `min(d_H(f̄^j K, f̄^j L), α - β)` (the other three) for `j = 0..=horizon`.
pub fn transfer_check<U: Universe>(
    system: &System<U>,
    k: &CompactSet<U>,
    l: &CompactSet<U>,
    alpha: &Rational,
    beta: &Rational,
    horizon: usize,
) -> Result<TransferReport> {
    check_nested(k, l)?;
    xi_map(alpha, beta)?;
    let fam = u_alpha_family(k, l, &[beta.clone(), alpha.clone()])?;
    let gap = U::Scalar::from_rational(&(alpha - beta));
    let (mut kj, mut lj) = (k.clone(), l.clone());
    let (mut ub, mut ua) = (Element::Fuzzy(fam[0].clone()), Element::Fuzzy(fam[1].clone()));
    let mut worst: BTreeMap<MetricKind, f64> = MetricKind::ALL.iter().map(|m| (*m, 0.0)).collect();
    let mut exact = true;
    let mut rows = Vec::with_capacity(horizon + 1);
    for j in 0..=horizon {
        if j > 0 {
            kj = hyper_apply(system, &kj);
            lj = hyper_apply(system, &lj);
            ub = ub.step(system);
            ua = ua.step(system);
        }
        let (Element::Fuzzy(b), Element::Fuzzy(a)) = (&ub, &ua) else {
            unreachable!("fuzzy elements stay fuzzy")
        };
        let h = hausdorff(&kj, &lj)?;
        let mut values = BTreeMap::new();
        for m in MetricKind::ALL {
            let got = fuzzy_distance(m, b, a)?;
            let want = if m == MetricKind::Sup { h.clone() } else { h.min_of(&gap) };
            if !got.eq_tol(&want) {
                exact = false;
            }
            let e = got.abs_diff(&want).to_f64();
            let slot = worst.get_mut(&m).expect("all metrics present");
            *slot = slot.max(e);
            values.insert(m, got.to_string());
        }
        rows.push(TransferRow {
            j,
            hausdorff: h.to_string(),
            values,
        });
    }
    Ok(TransferReport {
        horizon,
        alpha: alpha.clone(),
        beta: beta.clone(),
        max_discrepancy: worst,
        exact,
        rows,
    })
}

/// `x ↦ {x}` and `K ↦ χ_K`.
pub fn canonical_embeddings<U: Universe>(universe: &Arc<U>, e: &Element<U>) -> Result<Element<U>> {
    match e {
        Element::Point(p) => Ok(Element::Set(CompactSet::singleton(Arc::clone(universe), p.clone())?)),
        Element::Set(k) => Ok(Element::Fuzzy(StepFuzzySet::indicator(k))),
        Element::Fuzzy(_) => domain("fuzzy sets have no canonical embedding here"),
    }
}
