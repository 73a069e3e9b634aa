//! Subsets A of the positive integers with exact membership and prefix counts.

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityKind {
    Naturals,
    FactorialBlocks,
    SquaredExponents,
    DoublingBlocks,
    CustomList,
}

pub trait DensitySet: Debug + Send + Sync {
    fn kind(&self) -> DensityKind;
    fn contains(&self, n: u64) -> bool;
    /// `|A ∩ [1, n]|`.
    fn count_upto(&self, n: u64) -> u64;

    fn name(&self) -> String {
        serde_json::to_value(self.kind())
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Naturals;

impl DensitySet for Naturals {
    fn kind(&self) -> DensityKind {
        DensityKind::Naturals
    }
    fn contains(&self, n: u64) -> bool {
        n >= 1
    }
    fn count_upto(&self, n: u64) -> u64 {
        n
    }
}

/// Half-open integer blocks `[start, end)`, sorted and disjoint.
fn block_count(blocks: impl Iterator<Item = (u128, u128)>, n: u64) -> u64 {
    let n = n as u128;
    let mut total = 0u128;
    for (start, end) in blocks {
        if start > n {
            break;
        }
        total += end.min(n + 1) - start;
    }
    total as u64
}

fn in_blocks(mut blocks: impl Iterator<Item = (u128, u128)>, n: u64) -> bool {
    let n = n as u128;
    blocks.any(|(s, e)| s <= n && n < e)
}

/// `⋃_{k≥1} [(2k)!, (2k+1)!)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FactorialBlocks;

impl FactorialBlocks {
    fn blocks() -> impl Iterator<Item = (u128, u128)> {
        let fact = |m: u128| (1..=m).product::<u128>();
        (1u128..=12).map(move |k| (fact(2 * k), fact(2 * k + 1)))
    }
}

impl DensitySet for FactorialBlocks {
    fn kind(&self) -> DensityKind {
        DensityKind::FactorialBlocks
    }
    fn contains(&self, n: u64) -> bool {
        in_blocks(Self::blocks(), n)
    }
    fn count_upto(&self, n: u64) -> u64 {
        block_count(Self::blocks(), n)
    }
}

/// `⋃_{k≥0} [4^k, 2·4^k)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct DoublingBlocks;

impl DoublingBlocks {
    fn blocks() -> impl Iterator<Item = (u128, u128)> {
        (0u32..32).map(|k| (1u128 << (2 * k), 1u128 << (2 * k + 1)))
    }
}

impl DensitySet for DoublingBlocks {
    fn kind(&self) -> DensityKind {
        DensityKind::DoublingBlocks
    }
    fn contains(&self, n: u64) -> bool {
        n >= 1 && (63 - n.leading_zeros()).is_multiple_of(2)
    }
    fn count_upto(&self, n: u64) -> u64 {
        block_count(Self::blocks(), n)
    }
}

/// `{2^(k²) : k ≥ 1}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SquaredExponents;

impl SquaredExponents {
    fn elements() -> impl Iterator<Item = u64> {
        (1u32..=7).map(|k| 1u64 << (k * k))
    }
}

impl DensitySet for SquaredExponents {
    fn kind(&self) -> DensityKind {
        DensityKind::SquaredExponents
    }
    fn contains(&self, n: u64) -> bool {
        Self::elements().any(|a| a == n)
    }
    fn count_upto(&self, n: u64) -> u64 {
        Self::elements().filter(|a| *a <= n).count() as u64
    }
}

/// A finite set given by its elements.
#[derive(Debug, Clone, Default)]
pub struct CustomList {
    elements: Vec<u64>,
}

impl CustomList {
    pub fn new(mut elements: Vec<u64>) -> Self {
        elements.retain(|n| *n >= 1);
        elements.sort_unstable();
        elements.dedup();
        CustomList { elements }
    }
}

impl DensitySet for CustomList {
    fn kind(&self) -> DensityKind {
        DensityKind::CustomList
    }
    fn contains(&self, n: u64) -> bool {
        self.elements.binary_search(&n).is_ok()
    }
    fn count_upto(&self, n: u64) -> u64 {
        self.elements.partition_point(|a| *a <= n) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(a: &dyn DensitySet, n: u64) -> u64 {
        (1..=n).filter(|j| a.contains(*j)).count() as u64
    }

    #[test]
    fn counts_match_membership() {
        let sets: Vec<Box<dyn DensitySet>> = vec![
            Box::new(Naturals),
            Box::new(FactorialBlocks),
            Box::new(DoublingBlocks),
            Box::new(SquaredExponents),
            Box::new(CustomList::new(vec![9, 3, 3, 0, 70])),
        ];
        for a in &sets {
            let mut running = 0;
            for n in 1..6000u64 {
                if a.contains(n) {
                    running += 1;
                }
                assert_eq!(a.count_upto(n), running, "{} at {n}", a.name());
            }
        }
    }

    #[test]
    fn factorial_block_counts() {
        let a = FactorialBlocks;
        assert_eq!(brute(&a, 5039), 4420);
        assert_eq!(a.count_upto(5039), 4420);
        // 8! = 40320 opens the fourth block
        assert_eq!(brute(&a, 40320), 4421);
        assert_eq!(a.count_upto(40320), 4421);
        assert_eq!(brute(&a, 362879), 326980);
        assert_eq!(a.count_upto(362879), 326980);
        assert!(a.contains(24) && a.contains(2) && !a.contains(1) && !a.contains(6));
    }

    #[test]
    fn doubling_block_edges() {
        let a = DoublingBlocks;
        for m in 1..8u32 {
            let low = (1u64 << (2 * m)) - 1;
            let high = (1u64 << (2 * m + 1)) - 1;
            assert_eq!(3 * a.count_upto(low), low);
            assert_eq!(brute(&a, low), a.count_upto(low));
            assert_eq!(3 * a.count_upto(high), 2 * high + 1);
        }
    }

    #[test]
    fn squared_exponents() {
        let a = SquaredExponents;
        assert!(a.contains(2) && a.contains(16) && a.contains(512) && a.contains(65536));
        assert!(!a.contains(4) && !a.contains(1));
        assert_eq!(a.count_upto(65535), 3);
        assert_eq!(a.name(), "squared-exponents");
    }
}
