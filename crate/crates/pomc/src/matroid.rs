use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solution::Solution;

/// A partition matroid over the ground set `{0, .., n-1}`: a partition into
/// `k` disjoint blocks `B_1..B_k` covering `V`, with integer thresholds
/// `d_1..d_k`. A subset `X` is feasible iff `|X ∩ B_i| <= d_i` for all `i`.
///
/// The standing assumption `1 <= d_i <= |B_i|` is enforced by every
/// constructor and by [`set_thresholds`](Self::set_thresholds).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionMatroid {
    blocks: Vec<Vec<usize>>,
    thresholds: Vec<usize>,
    /// block index of each element; derived from `blocks`.
    block_of: Vec<usize>,
}

impl PartitionMatroid {
    pub fn new(blocks: Vec<Vec<usize>>, thresholds: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidMatroid("no blocks".into()));
        }
        if blocks.len() != thresholds.len() {
            return Err(Error::InvalidMatroid(format!(
                "{} blocks but {} thresholds",
                blocks.len(),
                thresholds.len()
            )));
        }
        let n: usize = blocks.iter().map(Vec::len).sum();
        let mut block_of = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &e in block {
                if e >= n {
                    return Err(Error::InvalidMatroid(format!(
                        "element {e} out of range for ground set of size {n}"
                    )));
                }
                if block_of[e] != usize::MAX {
                    return Err(Error::InvalidMatroid(format!(
                        "element {e} appears in more than one block"
                    )));
                }
                block_of[e] = b;
            }
        }
        // Sizes sum to n and no element repeats, so every element is covered.
        let m = PartitionMatroid {
            blocks,
            thresholds: thresholds.clone(),
            block_of,
        };
        m.check_thresholds(&thresholds)?;
        Ok(m)
    }

    /// Single-block matroid (`k = 1`): a plain cardinality constraint.
    pub fn single_block(n: usize, d: usize) -> Result<Self> {
        PartitionMatroid::new(vec![(0..n).collect()], vec![d])
    }

    /// Random equal-size partition of `{0, .., n-1}` into `k` blocks:
    /// a seeded uniform shuffle of the elements sliced into `k` slabs of
    /// size `n / k`. Requires `k` to divide `n`.
    pub fn random_equal<R: Rng>(
        n: usize,
        k: usize,
        thresholds: Vec<usize>,
        rng: &mut R,
    ) -> Result<Self> {
        if k == 0 || n % k != 0 {
            return Err(Error::InvalidMatroid(format!(
                "k={k} must be positive and divide n={n}"
            )));
        }
        let mut elems: Vec<usize> = (0..n).collect();
        elems.shuffle(rng);
        let blocks = elems.chunks(n / k).map(<[usize]>::to_vec).collect();
        PartitionMatroid::new(blocks, thresholds)
    }

    fn check_thresholds(&self, thresholds: &[usize]) -> Result<()> {
        if thresholds.len() != self.blocks.len() {
            return Err(Error::InvalidThresholds(format!(
                "{} thresholds for {} blocks",
                thresholds.len(),
                self.blocks.len()
            )));
        }
        for (i, (&d, block)) in thresholds.iter().zip(&self.blocks).enumerate() {
            if d < 1 || d > block.len() {
                return Err(Error::InvalidThresholds(format!(
                    "d_{} = {} outside [1, {}]",
                    i + 1,
                    d,
                    block.len()
                )));
            }
        }
        Ok(())
    }

    /// Replace the thresholds (a dynamic change event). Validates
    /// `1 <= d_i <= |B_i|`; the partition itself never changes.
    pub fn set_thresholds(&mut self, thresholds: Vec<usize>) -> Result<()> {
        self.check_thresholds(&thresholds)?;
        self.thresholds = thresholds;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.block_of.len()
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn block_of(&self, element: usize) -> usize {
        self.block_of[element]
    }

    pub fn thresholds(&self) -> &[usize] {
        &self.thresholds
    }

    /// `d = Σ d_i`.
    pub fn d(&self) -> usize {
        self.thresholds.iter().sum()
    }

    /// `d̄ = min_i d_i`.
    pub fn d_bar(&self) -> usize {
        *self.thresholds.iter().min().expect("k >= 1")
    }

    /// Number of selected elements in each block.
    pub fn block_counts(&self, x: &Solution) -> Vec<usize> {
        assert_eq!(
            x.len(),
            self.n(),
            "solution length {} does not match ground set size {}",
            x.len(),
            self.n()
        );
        let mut counts = vec![0usize; self.k()];
        for e in x.indices() {
            counts[self.block_of[e]] += 1;
        }
        counts
    }

    /// True iff `|X ∩ B_i| <= d_i` for every block.
    ///
    /// Panics if the solution length does not match the ground set size.
    pub fn is_feasible(&self, x: &Solution) -> bool {
        assert_eq!(
            x.len(),
            self.n(),
            "solution length {} does not match ground set size {}",
            x.len(),
            self.n()
        );
        let mut counts = vec![0usize; self.k()];
        for e in x.indices() {
            let b = self.block_of[e];
            counts[b] += 1;
            if counts[b] > self.thresholds[b] {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_block() -> PartitionMatroid {
        PartitionMatroid::new(vec![vec![0, 1, 2], vec![3, 4, 5]], vec![2, 1]).unwrap()
    }

    #[test]
    fn feasible_within_thresholds() {
        let m = two_block();
        assert!(m.is_feasible(&Solution::from_indices(6, &[0, 1, 3])));
    }

    #[test]
    fn infeasible_when_block_over_threshold() {
        let m = two_block();
        assert!(!m.is_feasible(&Solution::from_indices(6, &[0, 1, 2])));
    }

    #[test]
    fn empty_set_is_always_feasible() {
        let m = two_block();
        assert!(m.is_feasible(&Solution::empty(6)));
    }

    #[test]
    #[should_panic(expected = "does not match ground set size")]
    fn length_mismatch_is_a_contract_violation() {
        let m = two_block();
        m.is_feasible(&Solution::empty(5));
    }

    #[test]
    fn derived_quantities() {
        let m = two_block();
        assert_eq!(m.d(), 3);
        assert_eq!(m.d_bar(), 1);
        assert!(m.d_bar() <= m.d() / m.k());
    }

    #[test]
    fn rejects_overlapping_blocks() {
        let err = PartitionMatroid::new(vec![vec![0, 1], vec![1]], vec![1, 1]);
        assert!(err.is_err());
    }

    #[test]
    fn rejects_out_of_range_thresholds() {
        assert!(PartitionMatroid::new(vec![vec![0, 1]], vec![0]).is_err());
        assert!(PartitionMatroid::new(vec![vec![0, 1]], vec![3]).is_err());
        let mut m = two_block();
        assert!(m.set_thresholds(vec![3, 1]).is_ok());
        assert!(m.set_thresholds(vec![4, 1]).is_err());
        assert!(m.set_thresholds(vec![2]).is_err());
    }

    #[test]
    fn random_equal_partitions_cover_ground_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = PartitionMatroid::random_equal(12, 3, vec![2, 2, 2], &mut rng).unwrap();
        assert_eq!(m.k(), 3);
        assert_eq!(m.block_sizes(), vec![4, 4, 4]);
        let mut seen: Vec<usize> = m.blocks().iter().flatten().copied().collect();
        seen.sort_unstable();
        assert_eq!(seen, (0..12).collect::<Vec<_>>());
    }

    #[test]
    fn random_equal_requires_divisibility() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(PartitionMatroid::random_equal(10, 3, vec![1, 1, 1], &mut rng).is_err());
    }
}
