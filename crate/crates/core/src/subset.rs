//! Bitset subsets of a finite parent set.

use std::cmp::Ordering;
use std::fmt;

/// Largest parent set a [`Subset`] can index into.
pub const MAX_ELEMENTS: usize = 64;

/// A subset of `{0, .., n-1}` for some parent size `n <= 64`.
///
/// Equality is extensional. The parent size is not stored, so callers that
/// need a complement pass it explicitly.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_ELEMENTS);
        if n == MAX_ELEMENTS {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_ELEMENTS);
        Subset(1u64 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices.into_iter().fold(Subset::EMPTY, |s, i| s.with(i))
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_ELEMENTS && self.0 & (1u64 << i) != 0
    }

    #[must_use]
    pub fn with(self, i: usize) -> Self {
        Subset(self.0 | (1u64 << i))
    }

    #[must_use]
    pub fn without(self, i: usize) -> Self {
        Subset(self.0 & !(1u64 << i))
    }

    pub fn union(self, other: Subset) -> Self {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Self {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Self {
        Subset(self.0 & !other.0)
    }

    /// Complement relative to a parent of size `n`.
    pub fn complement(self, n: usize) -> Self {
        Subset::full(n).difference(self)
    }

    pub fn is_subset(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// The single member of a singleton.
    pub fn single(self) -> Option<usize> {
        (self.len() == 1).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in increasing order.
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// Largest member plus one, i.e. the smallest parent size this subset
    /// fits into.
    pub fn bound(self) -> usize {
        MAX_ELEMENTS - self.0.leading_zeros() as usize
    }

    /// Canonical order: by cardinality, then lexicographically on the
    /// increasing index lists.
    pub fn canonical_cmp(&self, other: &Subset) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl IntoIterator for Subset {
    type Item = usize;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Subset::from_indices(iter)
    }
}

#[derive(Clone, Debug)]
pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

/// Sorts a list of subsets into canonical order.
pub fn sort_canonical(sets: &mut [Subset]) {
    sets.sort_by(Subset::canonical_cmp);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_complement() {
        assert_eq!(Subset::full(0), Subset::EMPTY);
        assert_eq!(Subset::full(64).len(), 64);
        let s = Subset::from_indices([0, 2]);
        assert_eq!(s.complement(4), Subset::from_indices([1, 3]));
    }

    #[test]
    fn canonical_order_is_cardinality_then_lex() {
        let mut v = vec![
            Subset::from_indices([1, 3]),
            Subset::from_indices([2]),
            Subset::from_indices([0, 2]),
            Subset::EMPTY,
            Subset::from_indices([1]),
        ];
        sort_canonical(&mut v);
        let lists: Vec<Vec<usize>> = v.iter().map(|s| s.iter().collect()).collect();
        assert_eq!(lists, vec![vec![], vec![1], vec![2], vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn lex_compares_index_lists_not_bits() {
        // [0,3] < [1,2] lexicographically although 0b1001 > 0b0110.
        let a = Subset::from_indices([0, 3]);
        let b = Subset::from_indices([1, 2]);
        assert_eq!(a.canonical_cmp(&b), Ordering::Less);
    }

    #[test]
    fn bound_and_single() {
        assert_eq!(Subset::EMPTY.bound(), 0);
        assert_eq!(Subset::from_indices([4]).bound(), 5);
        assert_eq!(Subset::from_indices([4]).single(), Some(4));
        assert_eq!(Subset::from_indices([1, 4]).single(), None);
    }
}
