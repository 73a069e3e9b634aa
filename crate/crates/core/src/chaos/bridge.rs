//! The two inequalities tying Cesàro means to the frequency of large distances:
//! `δ·F_n(δ) ≤ M_n ≤ δ + r·F_n(δ)` with `F_n(δ) = |{j ≤ n : d_j ≥ δ}| / n`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

use super::DistanceTrace;

/// Relative slack allowed for the float sums.
const SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct BridgeViolation {
    pub n: usize,
    pub delta: String,
    pub lower: f64,
    pub mean: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BridgeReport {
    pub horizon: usize,
    pub grid_size: usize,
    pub checked: usize,
    pub violations: Vec<BridgeViolation>,
}

impl BridgeReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn bridge_check<S: Scalar>(trace: &DistanceTrace<S>, r: &S, grid: &[Rational]) -> Result<BridgeReport> {
    if let Some((j, d)) = trace.values.iter().enumerate().find(|(_, d)| r.lt_tol(d)) {
        return Err(Error::Precondition(format!("d_{} = {d} exceeds the bound {r}", j + 1)));
    }
    let thresholds: Vec<S> = grid.iter().map(S::from_rational).collect();
    let deltas: Vec<f64> = thresholds.iter().map(Scalar::to_f64).collect();
    let rf = r.to_f64();
    let mut far = vec![0u64; grid.len()];
    let mut sum = 0.0;
    let mut violations = Vec::new();
    for (i, d) in trace.values.iter().enumerate() {
        let n = i + 1;
        sum += d.to_f64();
        let mean = sum / n as f64;
        let slack = SUM_TOL * (1.0 + mean.abs());
        for (g, t) in thresholds.iter().enumerate() {
            if t.le_tol(d) {
                far[g] += 1;
            }
            let freq = far[g] as f64 / n as f64;
            let lower = deltas[g] * freq;
            let upper = deltas[g] + rf * freq;
            if lower > mean + slack || mean > upper + slack {
                violations.push(BridgeViolation {
                    n,
                    delta: grid[g].to_string(),
                    lower,
                    mean,
                    upper,
                });
            }
        }
    }
    Ok(BridgeReport {
        horizon: trace.horizon(),
        grid_size: grid.len(),
        checked: trace.horizon() * grid.len(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::profile::default_grid;
    use crate::chaos::Level;
    use crate::scalar::{int, rat};

    fn trace<S>(values: Vec<S>) -> DistanceTrace<S> {
        DistanceTrace {
            level: Level::Base,
            left: "a".into(),
            right: "b".into(),
            values,
        }
    }

    #[test]
    fn constant_trace_has_slack() {
        let t = trace(vec![rat(3, 4); 50]);
        let rep = bridge_check(&t, &int(1), &[rat(3, 8)]).unwrap();
        assert!(rep.pass());
        assert_eq!(rep.checked, 50);
    }

    #[test]
    fn two_valued_trace_passes_full_grid() {
        let t = trace((1..=300).map(|j| if j % 3 == 0 { int(1) } else { int(2) }).collect());
        assert!(bridge_check(&t, &int(2), &default_grid()).unwrap().pass());
    }

    #[test]
    fn bound_is_a_precondition() {
        let t = trace(vec![0.5, 3.0]);
        assert!(matches!(bridge_check(&t, &2.0, &[int(1)]), Err(Error::Precondition(_))));
    }
}
