use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::scalar::Rational;
use crate::spaces::density::DensitySet;

/// Geometric checkpoints `⌈n / 2^i⌉` for `i = 0..=depth`, plus the structural
/// checkpoints lying in `[⌈n / 2^depth⌉, n]`. Sorted, without repeats.
pub fn checkpoint_schedule(n: usize, depth: u32, structural: &[usize]) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    let floor = n.div_ceil(1usize << depth.min(63));
    let mut out: Vec<usize> = (0..=depth.min(63)).map(|i| n.div_ceil(1usize << i)).collect();
    out.extend(structural.iter().copied().filter(|m| (floor..=n).contains(m)));
    out.sort_unstable();
    out.dedup();
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityRatio {
    pub checkpoint: u64,
    pub count: u64,
    #[serde(with = "crate::scalar::rational_serde")]
    pub ratio: Rational,
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub set: String,
    pub ratios: Vec<DensityRatio>,
    /// Lower density proxy: the smallest checkpoint ratio.
    #[serde(with = "crate::scalar::rational_serde")]
    pub inf: Rational,
    #[serde(with = "crate::scalar::rational_serde")]
    pub sup: Rational,
}

/// Exact `|A ∩ [1,m]| / m` at every checkpoint `m ≤ n`.
pub fn density_estimate(a: &dyn DensitySet, n: u64, checkpoints: &[u64]) -> Result<DensityReport> {
    if checkpoints.is_empty() {
        return domain("no checkpoints given");
    }
    let mut ratios = Vec::with_capacity(checkpoints.len());
    for &m in checkpoints {
        if m == 0 || m > n {
            return domain(format!("checkpoint {m} outside [1, {n}]"));
        }
        let count = a.count_upto(m);
        ratios.push(DensityRatio {
            checkpoint: m,
            count,
            ratio: Rational::new(BigInt::from(count), BigInt::from(m)),
        });
    }
    let inf = ratios.iter().map(|r| &r.ratio).min().cloned().unwrap_or_default();
    let sup = ratios.iter().map(|r| &r.ratio).max().cloned().unwrap_or_default();
    Ok(DensityReport {
        set: a.name(),
        ratios,
        inf,
        sup,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use crate::spaces::density::{DoublingBlocks, FactorialBlocks, Naturals};

    #[test]
    fn naturals_have_density_one() {
        let r = density_estimate(&Naturals, 100, &[1, 7, 100]).unwrap();
        assert!(r.ratios.iter().all(|x| x.ratio == int(1)));
    }

    #[test]
    fn factorial_block_ratios() {
        let r = density_estimate(&FactorialBlocks, 362879, &[5039, 40320, 362879]).unwrap();
        let got: Vec<u64> = r.ratios.iter().map(|x| x.count).collect();
        assert_eq!(got, vec![4420, 4421, 326980]);
        assert_eq!(r.ratios[1].ratio, rat(4421, 40320));
        assert_eq!(r.inf, rat(4421, 40320));
        assert_eq!(r.sup, rat(326980, 362879));
    }

    #[test]
    fn doubling_block_ratios_approach_thirds() {
        let cps: Vec<u64> = (5..9).flat_map(|m| [(1u64 << (2 * m)) - 1, (1u64 << (2 * m + 1)) - 1]).collect();
        let r = density_estimate(&DoublingBlocks, 1 << 17, &cps).unwrap();
        assert_eq!(r.inf, rat(1, 3));
        assert!((crate::scalar::Scalar::to_f64(&r.sup) - 2.0 / 3.0).abs() < 1e-3);
    }

    #[test]
    fn checkpoints_beyond_horizon_are_rejected() {
        assert!(density_estimate(&Naturals, 10, &[11]).is_err());
        assert!(density_estimate(&Naturals, 10, &[0]).is_err());
        assert!(density_estimate(&Naturals, 10, &[]).is_err());
    }

    #[test]
    fn schedule_is_sorted_and_bounded() {
        let s = checkpoint_schedule(100, 3, &[5, 20, 99, 200]);
        assert_eq!(s, vec![13, 20, 25, 50, 99, 100]);
        assert_eq!(checkpoint_schedule(1, 5, &[]), vec![1]);
    }
}
