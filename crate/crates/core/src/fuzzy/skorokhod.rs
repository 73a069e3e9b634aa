//! Exact Skorokhod distance between step fuzzy sets.
//!
//! The level sets of `u` are constant on the intervals `(a_{i-1}, a_i]` and those
//! of `v` on `(b_{k-1}, b_k]`. A reparametrization only matters through the times
//! `t_k = ξ(b_k)` at which the `v`-index advances, so for a fixed ε we look for
//! increasing `t_k` with `|t_k - b_k| ≤ ε` such that every pair of overlapping
//! intervals has level sets within ε. Feasibility changes only at the critical
//! values `d_H(U_i, V_k)` and `|a_i - b_k|`; the distance is the smallest critical
//! value just above which the sweep below succeeds.

use std::cmp::Ordering;

use crate::scalar::Scalar;
use crate::spaces::Universe;

use super::metrics::set_hausdorff;
use super::StepFuzzySet;

/// Lower bound on the next transition time: `t ≥ value`, or `t > value` when open.
#[derive(Clone, Debug)]
struct Lower<S> {
    value: S,
    open: bool,
}

impl<S: Scalar> Lower<S> {
    fn closed(value: S) -> Self {
        Lower { value, open: false }
    }

    fn open(value: S) -> Self {
        Lower { value, open: true }
    }

    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .cmp_tol(&other.value)
            .then(self.open.cmp(&other.open))
    }

    fn max(self, other: Self) -> Self {
        if self.cmp(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    /// Whether some admissible time is `≤ hi` (closed bound).
    fn admits(&self, hi: &S) -> bool {
        if self.open {
            self.value.lt_tol(hi)
        } else {
            self.value.le_tol(hi)
        }
    }
}

fn keep_min<S: Scalar>(slot: &mut Option<Lower<S>>, cand: Lower<S>) {
    match slot {
        Some(cur) if cur.cmp(&cand) != Ordering::Greater => {}
        _ => *slot = Some(cand),
    }
}

struct Grid<S> {
    /// `0 = a_0 < a_1 < … < a_N = 1`
    a: Vec<S>,
    /// `0 = b_0 < b_1 < … < b_M = 1`
    b: Vec<S>,
    /// `h[i][k] = d_H(U_{i+1}, V_{k+1})`
    h: Vec<Vec<S>>,
}

impl<S: Scalar> Grid<S> {
    fn feasible(&self, eps: &S) -> bool {
        let n = self.a.len() - 1;
        let m = self.b.len() - 1;
        let mut dp: Vec<Option<Lower<S>>> = vec![None; m];
        dp[0] = Some(Lower::open(S::nought()));
        for i in 0..n {
            for (k, slot) in dp.iter_mut().enumerate() {
                if !self.h[i][k].le_tol(eps) {
                    *slot = None;
                }
            }
            // the v-index advances inside row i
            for k in 0..m.saturating_sub(1) {
                let Some(lo) = dp[k].clone() else { continue };
                if !self.h[i][k + 1].le_tol(eps) {
                    continue;
                }
                let target = &self.b[k + 1];
                let t = lo
                    .max(Lower::open(self.a[i].clone()))
                    .max(Lower::closed(target.minus(eps)));
                if t.value.lt_tol(&self.a[i + 1]) && t.admits(&target.plus(eps)) {
                    keep_min(&mut dp[k + 1], Lower::open(t.value));
                }
            }
            if i + 1 == n {
                return dp[m - 1].is_some();
            }
            // carry into row i+1, possibly advancing exactly at a_{i+1}
            let edge = &self.a[i + 1];
            let mut next = dp.clone();
            for k in 0..m.saturating_sub(1) {
                let Some(lo) = &dp[k] else { continue };
                if lo.admits(edge) && edge.abs_diff(&self.b[k + 1]).le_tol(eps) {
                    keep_min(&mut next[k + 1], Lower::open(edge.clone()));
                }
            }
            dp = next;
        }
        unreachable!("the last row returns")
    }
}

fn grid<U: Universe>(u: &StepFuzzySet<U>, v: &StepFuzzySet<U>) -> Grid<U::Scalar> {
    let universe = u.universe().as_ref();
    let pu = u.pieces();
    let pv = v.pieces();
    let levels = |pieces: &[(crate::scalar::Rational, crate::hyper::CompactSet<U>)]| {
        std::iter::once(U::Scalar::nought())
            .chain(pieces.iter().map(|(a, _)| U::Scalar::from_rational(a)))
            .collect::<Vec<_>>()
    };
    let sets = |pieces: &[(crate::scalar::Rational, crate::hyper::CompactSet<U>)]| {
        pieces
            .iter()
            .map(|(_, s)| s.points().iter().cloned().collect::<Vec<_>>())
            .collect::<Vec<_>>()
    };
    let su = sets(&pu);
    let sv = sets(&pv);
    let h = su
        .iter()
        .map(|x| sv.iter().map(|y| set_hausdorff(universe, x, y)).collect())
        .collect();
    Grid {
        a: levels(&pu),
        b: levels(&pv),
        h,
    }
}

/// Whether some reparametrization `ξ` achieves `max(sup|ξ - id|, d∞(u, ξ∘v)) ≤ ε`,
/// allowing the infimum to be approached rather than attained.
pub fn feasible_at<U: Universe>(u: &StepFuzzySet<U>, v: &StepFuzzySet<U>, eps: &U::Scalar) -> bool {
    grid(u, v).feasible(eps)
}

pub fn skorokhod<U: Universe>(u: &StepFuzzySet<U>, v: &StepFuzzySet<U>) -> U::Scalar {
    let g = grid(u, v);
    let mut crit: Vec<U::Scalar> = vec![U::Scalar::nought()];
    for row in &g.h {
        crit.extend(row.iter().cloned());
    }
    for x in &g.a {
        for y in &g.b {
            crit.push(x.abs_diff(y));
        }
    }
    crit.sort_by(|x, y| x.cmp_tol(y));
    crit.dedup_by(|x, y| x.eq_tol(y));
    let probe = |j: usize| -> U::Scalar {
        match crit.get(j + 1) {
            Some(next) => crit[j].plus(next).halve(),
            None => crit[j].plus(&U::Scalar::unit()),
        }
    };
    let (mut lo, mut hi) = (0usize, crit.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if g.feasible(&probe(mid)) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    crit[lo].clone()
}
