use std::fmt;

/// A subset of the ground set `V = {0, .., n-1}`, stored as a fixed-length
/// bit vector: element `i` is in the set iff bit `i` is set.
///
/// The length is fixed at construction and never changes. The derived `Ord`
/// is lexicographic over the bits (element 0 first), which is the
/// deterministic tie-break order used throughout the crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Solution {
    bits: Vec<bool>,
}

impl Solution {
    /// The empty set over a ground set of size `n`.
    pub fn empty(n: usize) -> Self {
        Solution {
            bits: vec![false; n],
        }
    }

    /// The full ground set.
    pub fn full(n: usize) -> Self {
        Solution {
            bits: vec![true; n],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Solution { bits }
    }

    pub fn from_indices(n: usize, indices: &[usize]) -> Self {
        let mut s = Solution::empty(n);
        for &i in indices {
            s.bits[i] = true;
        }
        s
    }

    /// Subset encoded in the low `n` bits of `mask` (bit `i` = element `i`).
    pub fn from_mask(n: usize, mask: u64) -> Self {
        debug_assert!(n <= 64);
        Solution {
            bits: (0..n).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    /// Ground set size `n` (not the subset cardinality).
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Number of elements in the subset.
    pub fn cardinality(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn insert(&mut self, i: usize) {
        self.bits[i] = true;
    }

    pub fn remove(&mut self, i: usize) {
        self.bits[i] = false;
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] = !self.bits[i];
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.bits
    }

    /// Indices of the elements in the subset, ascending.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }

    pub fn complement(&self) -> Self {
        Solution {
            bits: self.bits.iter().map(|&b| !b).collect(),
        }
    }
}

impl fmt::Debug for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}
