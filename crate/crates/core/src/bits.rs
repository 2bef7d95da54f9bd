use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Not, Sub};

use serde::{Deserialize, Serialize};

/// Largest resource universe a [`ResourceSet`] can address.
pub const MAX_RESOURCES: usize = 64;

/// A set of resource indices, stored as a 64-bit mask.
///
/// The derived ordering is the numeric order of the mask, which is the
/// "bitset order" used wherever classes or parts must be visited
/// deterministically.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ResourceSet(u64);

impl ResourceSet {
    pub const EMPTY: ResourceSet = ResourceSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        ResourceSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The set `{0, .., m-1}`.
    pub fn full(m: usize) -> Self {
        assert!(
            m <= MAX_RESOURCES,
            "resource universe of {m} exceeds {MAX_RESOURCES}"
        );
        if m == MAX_RESOURCES {
            ResourceSet(u64::MAX)
        } else {
            ResourceSet((1u64 << m) - 1)
        }
    }

    pub fn singleton(r: usize) -> Self {
        assert!(r < MAX_RESOURCES);
        ResourceSet(1u64 << r)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        it.into_iter()
            .fold(Self::EMPTY, |acc, r| acc | Self::singleton(r))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, r: usize) -> bool {
        r < MAX_RESOURCES && self.0 >> r & 1 == 1
    }

    pub fn insert(&mut self, r: usize) {
        *self |= Self::singleton(r);
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    /// Index of the highest member plus one, i.e. the smallest `m` with
    /// `self ⊆ full(m)`.
    pub fn span(self) -> usize {
        (u64::BITS - self.0.leading_zeros()) as usize
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// Re-indexes the members of `self` that lie in `keep` so that the
    /// i-th smallest member of `keep` becomes index i.
    pub fn compress(self, keep: Self) -> Self {
        let mut out = 0u64;
        for (i, r) in keep.iter().enumerate() {
            if self.contains(r) {
                out |= 1 << i;
            }
        }
        ResourceSet(out)
    }
}

impl fmt::Debug for ResourceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl BitOr for ResourceSet {
    type Output = Self;
    fn bitor(self, rhs: Self) -> Self {
        ResourceSet(self.0 | rhs.0)
    }
}

impl BitOrAssign for ResourceSet {
    fn bitor_assign(&mut self, rhs: Self) {
        self.0 |= rhs.0;
    }
}

impl BitAnd for ResourceSet {
    type Output = Self;
    fn bitand(self, rhs: Self) -> Self {
        ResourceSet(self.0 & rhs.0)
    }
}

impl BitAndAssign for ResourceSet {
    fn bitand_assign(&mut self, rhs: Self) {
        self.0 &= rhs.0;
    }
}

impl Sub for ResourceSet {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        ResourceSet(self.0 & !rhs.0)
    }
}

impl Not for ResourceSet {
    type Output = Self;
    fn not(self) -> Self {
        ResourceSet(!self.0)
    }
}

impl FromIterator<usize> for ResourceSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::from_indices(iter)
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let r = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(r)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_span() {
        assert_eq!(ResourceSet::full(0), ResourceSet::EMPTY);
        assert_eq!(ResourceSet::full(3).bits(), 0b111);
        assert_eq!(ResourceSet::full(64).len(), 64);
        assert_eq!(ResourceSet::from_indices([0, 5]).span(), 6);
        assert_eq!(ResourceSet::EMPTY.span(), 0);
    }

    #[test]
    fn compress_reindexes() {
        let keep = ResourceSet::from_indices([1, 3, 4]);
        let s = ResourceSet::from_indices([0, 3, 4]);
        assert_eq!(s.compress(keep), ResourceSet::from_indices([1, 2]));
    }

    #[test]
    fn iter_is_ascending() {
        let s = ResourceSet::from_indices([9, 2, 63]);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![2, 9, 63]);
    }
}
