//! Fixed-width element sets over a ground set of at most [`MAX_ELEMENTS`] elements.
//!
//! Elements are labeled `1..=n` everywhere in the public API; bit `e - 1` stores element `e`.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest supported ground set.
pub const MAX_ELEMENTS: usize = 16;

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElemSet(u32);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    #[inline]
    pub const fn from_bits(bits: u32) -> Self {
        ElemSet(bits)
    }

    #[inline]
    pub const fn bits(self) -> u32 {
        self.0
    }

    /// The set `{1, ..., n}`.
    #[inline]
    pub fn full(n: usize) -> Self {
        if n >= 32 {
            ElemSet(u32::MAX)
        } else {
            ElemSet((1u32 << n) - 1)
        }
    }

    #[inline]
    pub fn singleton(e: usize) -> Self {
        debug_assert!(e >= 1);
        ElemSet(1 << (e - 1))
    }

    pub fn from_elems<I: IntoIterator<Item = usize>>(elems: I) -> Self {
        elems
            .into_iter()
            .fold(ElemSet::EMPTY, |acc, e| acc.with(e))
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, e: usize) -> bool {
        e >= 1 && e <= 32 && self.0 & (1 << (e - 1)) != 0
    }

    #[inline]
    pub fn with(self, e: usize) -> Self {
        ElemSet(self.0 | (1 << (e - 1)))
    }

    #[inline]
    pub fn without(self, e: usize) -> Self {
        ElemSet(self.0 & !(1 << (e - 1)))
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        ElemSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        ElemSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        ElemSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Largest element, if any.
    #[inline]
    pub fn max_elem(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(32 - self.0.leading_zeros() as usize)
        }
    }

    pub fn iter(self) -> Elems {
        Elems(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Applies an element relabeling; `map[e - 1]` is the image of `e`.
    pub fn map(self, map: &[usize]) -> Self {
        self.iter().fold(ElemSet::EMPTY, |acc, e| acc.with(map[e - 1]))
    }

    /// Compacts the set onto `1..=|keep|`, listing only the elements of `keep` in order.
    pub fn compress(self, keep: ElemSet) -> Self {
        let mut out = 0u32;
        for (pos, e) in keep.iter().enumerate() {
            if self.contains(e) {
                out |= 1 << pos;
            }
        }
        ElemSet(out)
    }
}

/// Ascending iterator over the elements of an [`ElemSet`].
pub struct Elems(u32);

impl Iterator for Elems {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let tz = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(tz as usize + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// All `k`-subsets of `{1..=n}` in increasing numeric (colex) order of their bit patterns.
pub fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = ElemSet> {
    let limit: u64 = 1u64 << n;
    let first: u64 = if k == 0 { 0 } else { (1u64 << k) - 1 };
    let mut cur = if k > n { None } else { Some(first) };
    std::iter::from_fn(move || {
        let c = cur?;
        if c >= limit && !(c == 0 && k == 0) {
            cur = None;
            return None;
        }
        cur = if c == 0 {
            None
        } else {
            // Gosper's hack
            let lowest = c & c.wrapping_neg();
            let ripple = c + lowest;
            let next = (((ripple ^ c) >> 2) / lowest) | ripple;
            if next >= limit {
                None
            } else {
                Some(next)
            }
        };
        Some(ElemSet(c as u32))
    })
}

/// Every subset of `set`, including the empty set and `set` itself.
pub fn subsets_of(set: ElemSet) -> impl Iterator<Item = ElemSet> {
    let full = set.0;
    let mut cur = Some(0u32);
    std::iter::from_fn(move || {
        let c = cur?;
        cur = if c == full {
            None
        } else {
            Some((c.wrapping_sub(full)) & full)
        };
        Some(ElemSet(c))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_subsets_counts() {
        assert_eq!(subsets_of_size(6, 3).count(), 20);
        assert_eq!(subsets_of_size(4, 0).collect::<Vec<_>>(), vec![ElemSet::EMPTY]);
        assert_eq!(subsets_of_size(3, 4).count(), 0);
        assert_eq!(subsets_of_size(16, 8).count(), 12870);
        assert!(subsets_of_size(5, 2).all(|s| s.len() == 2));
    }

    #[test]
    fn all_subsets_of_a_set() {
        let s = ElemSet::from_elems([2, 4, 5]);
        let subs: Vec<_> = subsets_of(s).collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|t| t.is_subset(s)));
        assert_eq!(subsets_of(ElemSet::EMPTY).count(), 1);
    }

    #[test]
    fn compress_and_map() {
        let s = ElemSet::from_elems([2, 5]);
        let keep = ElemSet::from_elems([2, 3, 5]);
        assert_eq!(s.compress(keep), ElemSet::from_elems([1, 3]));
        let map = vec![3, 1, 2];
        assert_eq!(ElemSet::from_elems([1, 2]).map(&map), ElemSet::from_elems([1, 3]));
        assert_eq!(format!("{:?}", s), "{2,5}");
    }
}
