//! Sets of leaf labels drawn from `1..=64`, stored as a bitmask.

use std::cmp::Ordering;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Largest leaf label a [`LeafSet`] can hold.
pub const MAX_LABEL: u32 = 64;

/// A set of leaf labels. Ordered lexicographically by sorted member list,
/// so `{1,2,3,4,5,6} < {4,5,6} < {7,8,9}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LeafSet(u64);

impl LeafSet {
    pub const EMPTY: LeafSet = LeafSet(0);

    /// `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_LABEL as usize, "at most {MAX_LABEL} leaves");
        if n == 64 {
            LeafSet(u64::MAX)
        } else {
            LeafSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(label: u32) -> Self {
        debug_assert!((1..=MAX_LABEL).contains(&label));
        LeafSet(1u64 << (label - 1))
    }

    pub fn try_from_labels<I: IntoIterator<Item = u64>>(labels: I) -> Result<Self> {
        let mut set = LeafSet::EMPTY;
        for label in labels {
            if !(1..=MAX_LABEL as u64).contains(&label) {
                return Err(Error::LabelOutOfRange(label));
            }
            set.insert(label as u32);
        }
        Ok(set)
    }

    pub fn from_bits(bits: u64) -> Self {
        LeafSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn insert(&mut self, label: u32) {
        *self = *self | LeafSet::singleton(label);
    }

    pub fn remove(&mut self, label: u32) {
        self.0 &= !LeafSet::singleton(label).0;
    }

    pub fn with(self, label: u32) -> Self {
        self | LeafSet::singleton(label)
    }

    pub fn without(self, label: u32) -> Self {
        LeafSet(self.0 & !LeafSet::singleton(label).0)
    }

    pub fn contains(self, label: u32) -> bool {
        (1..=MAX_LABEL).contains(&label) && self.0 & (1u64 << (label - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn min(self) -> Option<u32> {
        (self.0 != 0).then(|| self.0.trailing_zeros() + 1)
    }

    pub fn max(self) -> Option<u32> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros())
    }

    pub fn is_subset(self, other: LeafSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: LeafSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn iter(self) -> Members {
        Members(self.0)
    }

    pub fn to_vec(self) -> Vec<u32> {
        self.iter().collect()
    }

    /// All `size`-subsets of this set, in lexicographic order.
    pub fn subsets(self, size: usize) -> impl Iterator<Item = LeafSet> {
        self.iter()
            .combinations(size)
            .map(|combo| combo.into_iter().collect::<LeafSet>())
    }
}

impl std::ops::BitOr for LeafSet {
    type Output = LeafSet;
    fn bitor(self, rhs: LeafSet) -> LeafSet {
        LeafSet(self.0 | rhs.0)
    }
}

impl std::ops::BitAnd for LeafSet {
    type Output = LeafSet;
    fn bitand(self, rhs: LeafSet) -> LeafSet {
        LeafSet(self.0 & rhs.0)
    }
}

impl std::ops::Sub for LeafSet {
    type Output = LeafSet;
    fn sub(self, rhs: LeafSet) -> LeafSet {
        LeafSet(self.0 & !rhs.0)
    }
}

impl FromIterator<u32> for LeafSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        let mut set = LeafSet::EMPTY;
        for label in iter {
            set.insert(label);
        }
        set
    }
}

impl Ord for LeafSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for LeafSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for LeafSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.iter().join(","))
    }
}

impl fmt::Display for LeafSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Ascending iterator over the labels of a [`LeafSet`].
#[derive(Clone)]
pub struct Members(u64);

impl Iterator for Members {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let bit = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(bit + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}
