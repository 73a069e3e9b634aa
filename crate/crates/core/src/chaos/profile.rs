use serde::Serialize;

use crate::error::{domain, Result};
use crate::scalar::{int, rat, Rational, Scalar};

use super::DistanceTrace;

/// `{2^-k : 0 ≤ k ≤ 10} ∪ {1/2, 1, 3/2, 2}`, ascending.
pub fn default_grid() -> Vec<Rational> {
    let mut g: Vec<Rational> = (0..=10).map(|k| rat(1, 1 << k)).collect();
    g.extend([rat(1, 2), int(1), rat(3, 2), int(2)]);
    g.sort();
    g.dedup();
    g
}

/// `grid` plus `extra`, ascending and without repeats.
pub fn grid_with(grid: &[Rational], extra: &[Rational]) -> Vec<Rational> {
    let mut g: Vec<Rational> = grid.iter().chain(extra).cloned().collect();
    g.sort();
    g.dedup();
    g
}

/// Running statistics of a trace fed one value at a time.
pub struct ProfileBuilder<S> {
    horizon: usize,
    grid: Vec<Rational>,
    thresholds: Vec<S>,
    checkpoints: Vec<usize>,
    next_cp: usize,
    /// `hits[g]` counts values whose first grid threshold above them is `g`.
    hits: Vec<u64>,
    counts: Vec<Vec<u64>>,
    j: usize,
    sum: f64,
    means: Vec<f64>,
    min: Option<(S, usize)>,
    tail_max: Option<(S, usize)>,
}

impl<S: Scalar> ProfileBuilder<S> {
    pub fn new(horizon: usize, grid: &[Rational], checkpoints: &[usize]) -> Result<Self> {
        if horizon == 0 {
            return domain("horizon must be at least 1");
        }
        if grid.is_empty() || grid.iter().any(|d| *d <= int(0)) {
            return domain("δ-grid must be non-empty and positive");
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return domain("δ-grid must be strictly increasing");
        }
        if checkpoints.is_empty() || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return domain("checkpoints must be non-empty and strictly increasing");
        }
        if checkpoints[0] == 0 || *checkpoints.last().unwrap() > horizon {
            return domain(format!("checkpoints must lie in [1, {horizon}]"));
        }
        Ok(ProfileBuilder {
            horizon,
            grid: grid.to_vec(),
            thresholds: grid.iter().map(S::from_rational).collect(),
            checkpoints: checkpoints.to_vec(),
            next_cp: 0,
            hits: vec![0; grid.len() + 1],
            counts: vec![Vec::with_capacity(checkpoints.len()); grid.len()],
            j: 0,
            sum: 0.0,
            means: Vec::with_capacity(horizon),
            min: None,
            tail_max: None,
        })
    }

    pub fn push(&mut self, d: &S) {
        self.j += 1;
        let j = self.j;
        let first_above = self.thresholds.partition_point(|t| t.le_tol(d));
        self.hits[first_above] += 1;
        self.sum += d.to_f64();
        self.means.push(self.sum / j as f64);
        if self.min.as_ref().is_none_or(|(m, _)| d.lt_tol(m)) {
            self.min = Some((d.clone(), j));
        }
        if 2 * j > self.horizon && self.tail_max.as_ref().is_none_or(|(m, _)| m.lt_tol(d)) {
            self.tail_max = Some((d.clone(), j));
        }
        if self.checkpoints.get(self.next_cp) == Some(&j) {
            let mut below = 0;
            for (g, row) in self.counts.iter_mut().enumerate() {
                below += self.hits[g];
                row.push(below);
            }
            self.next_cp += 1;
        }
    }

    pub fn finish(self) -> Result<DistributionalProfile<S>> {
        if self.j != self.horizon {
            return domain(format!("received {} values for horizon {}", self.j, self.horizon));
        }
        let (min_value, min_index) = self.min.expect("horizon ≥ 1");
        let (tail_max, tail_max_index) = self.tail_max.expect("horizon ≥ 1");
        Ok(DistributionalProfile {
            horizon: self.horizon,
            grid: self.grid,
            checkpoints: self.checkpoints,
            counts: self.counts,
            means: self.means,
            min_value,
            min_index,
            tail_max,
            tail_max_index,
        })
    }
}

/// Finite-horizon distributional functions and Cesàro means of one trace.
#[derive(Debug, Clone)]
pub struct DistributionalProfile<S> {
    pub horizon: usize,
    pub grid: Vec<Rational>,
    pub checkpoints: Vec<usize>,
    /// `counts[g][c] = |{j ≤ checkpoints[c] : d_j < grid[g]}|`
    pub counts: Vec<Vec<u64>>,
    /// `means[m-1] = (1/m) Σ_{j≤m} d_j`
    pub means: Vec<f64>,
    pub min_value: S,
    pub min_index: usize,
    /// Largest value over `j > horizon/2`.
    pub tail_max: S,
    pub tail_max_index: usize,
}

impl<S: Scalar> DistributionalProfile<S> {
    pub fn index_of(&self, delta: &Rational) -> Option<usize> {
        self.grid.iter().position(|d| d == delta)
    }

    pub fn ratio(&self, g: usize, c: usize) -> f64 {
        self.counts[g][c] as f64 / self.checkpoints[c] as f64
    }

    /// Exact `|{j ≤ m : d_j < δ}| / m`.
    pub fn exact_ratio(&self, g: usize, c: usize) -> Rational {
        Rational::new(self.counts[g][c].into(), self.checkpoints[c].into())
    }

    /// Φ̂(δ_g): the smallest checkpoint ratio.
    pub fn phi_lower(&self, g: usize) -> f64 {
        (0..self.checkpoints.len()).map(|c| self.ratio(g, c)).fold(f64::INFINITY, f64::min)
    }

    /// Φ̂*(δ_g): the largest checkpoint ratio.
    pub fn phi_upper(&self, g: usize) -> f64 {
        (0..self.checkpoints.len()).map(|c| self.ratio(g, c)).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean(&self, m: usize) -> f64 {
        self.means[m - 1]
    }

    /// Smallest and largest `M_m` over `m > horizon/2`.
    pub fn tail_means(&self) -> (f64, f64) {
        let start = self.horizon / 2;
        self.means[start..]
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), m| (lo.min(*m), hi.max(*m)))
    }

    pub fn summary(&self) -> ProfileSummary {
        let (tail_mean_min, tail_mean_max) = self.tail_means();
        ProfileSummary {
            horizon: self.horizon,
            checkpoints: self.checkpoints.clone(),
            rows: (0..self.grid.len())
                .map(|g| ProfileRow {
                    delta: self.grid[g].to_string(),
                    phi_lower: self.phi_lower(g),
                    phi_upper: self.phi_upper(g),
                })
                .collect(),
            min_value: self.min_value.to_string(),
            min_index: self.min_index,
            tail_max: self.tail_max.to_string(),
            tail_mean_min,
            tail_mean_max,
            final_mean: self.mean(self.horizon),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProfileRow {
    pub delta: String,
    pub phi_lower: f64,
    pub phi_upper: f64,
}

/// The serializable part of a profile; per-index means go to CSV instead.
#[derive(Debug, Clone, Serialize)]
pub struct ProfileSummary {
    pub horizon: usize,
    pub checkpoints: Vec<usize>,
    pub rows: Vec<ProfileRow>,
    pub min_value: String,
    pub min_index: usize,
    pub tail_max: String,
    pub tail_mean_min: f64,
    pub tail_mean_max: f64,
    pub final_mean: f64,
}

pub fn distributional_profile<S: Scalar>(
    trace: &DistanceTrace<S>,
    grid: &[Rational],
    checkpoints: &[usize],
) -> Result<DistributionalProfile<S>> {
    let mut b = ProfileBuilder::new(trace.horizon(), grid, checkpoints)?;
    for d in &trace.values {
        b.push(d);
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::Level;

    fn trace<S>(values: Vec<S>) -> DistanceTrace<S> {
        DistanceTrace {
            level: Level::Base,
            left: "a".into(),
            right: "b".into(),
            values,
        }
    }

    #[test]
    fn default_grid_contents() {
        let g = default_grid();
        assert_eq!(g.len(), 13);
        assert_eq!(g[0], rat(1, 1024));
        assert_eq!(g[12], int(2));
        assert!(g.contains(&rat(3, 2)));
    }

    #[test]
    fn constant_trace_below_delta() {
        let t = trace(vec![rat(1, 3); 40]);
        let p = distributional_profile(&t, &[rat(1, 4), rat(1, 2)], &[10, 20, 40]).unwrap();
        assert_eq!(p.phi_lower(1), 1.0);
        assert_eq!(p.phi_upper(1), 1.0);
        assert_eq!(p.phi_upper(0), 0.0);
        assert!((p.mean(40) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn strict_inequality_at_threshold() {
        let t = trace(vec![int(1), int(2), int(1), int(2)]);
        let p = distributional_profile(&t, &[int(1), rat(3, 2), int(2)], &[2, 4]).unwrap();
        assert_eq!(p.counts[0], vec![0, 0]);
        assert_eq!(p.counts[1], vec![1, 2]);
        assert_eq!(p.counts[2], vec![1, 2]);
        assert_eq!(p.exact_ratio(1, 1), rat(1, 2));
    }

    #[test]
    fn min_and_tail_max() {
        let t = trace(vec![3.0, 0.5, 2.0, 0.5, 1.0, 4.0, 0.25, 1.0]);
        let p = distributional_profile(&t, &[int(1)], &[8]).unwrap();
        assert_eq!((p.min_value, p.min_index), (0.25, 7));
        assert_eq!((p.tail_max, p.tail_max_index), (4.0, 6));
        let (lo, hi) = p.tail_means();
        assert!(lo <= hi);
    }

    #[test]
    fn rejects_bad_inputs() {
        let t = trace(vec![int(1); 4]);
        assert!(distributional_profile(&t, &[], &[4]).is_err());
        assert!(distributional_profile(&t, &[int(0)], &[4]).is_err());
        assert!(distributional_profile(&t, &[int(2), int(1)], &[4]).is_err());
        assert!(distributional_profile(&t, &[int(1)], &[5]).is_err());
        assert!(distributional_profile(&t, &[int(1)], &[3, 2]).is_err());
    }
}
