//! Vertex sets as multi-block bitsets.
//!
//! Vertices are dense indices `0..n-1`, so a bitset covers every graph the
//! crate handles; graphs with n <= 64 stay within a single block.

use std::cmp::Ordering;
use std::fmt;

const BLOCK: usize = 64;

/// A set of vertex indices.
///
/// Invariant: no trailing zero blocks, so structural equality and hashing
/// coincide with set equality.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: Vec<u64>,
}

impl VertexSet {
    pub fn new() -> Self {
        VertexSet { bits: Vec::new() }
    }

    pub fn singleton(v: usize) -> Self {
        let mut s = VertexSet::new();
        s.insert(v);
        s
    }

    /// The set {0, 1, ..., n-1}.
    pub fn full(n: usize) -> Self {
        let mut bits = vec![u64::MAX; n / BLOCK];
        let rem = n % BLOCK;
        if rem != 0 {
            bits.push((1u64 << rem) - 1);
        }
        let mut s = VertexSet { bits };
        s.trim();
        s
    }

    fn trim(&mut self) {
        while self.bits.last() == Some(&0) {
            self.bits.pop();
        }
    }

    pub fn insert(&mut self, v: usize) {
        let b = v / BLOCK;
        if b >= self.bits.len() {
            self.bits.resize(b + 1, 0);
        }
        self.bits[b] |= 1u64 << (v % BLOCK);
    }

    pub fn remove(&mut self, v: usize) {
        let b = v / BLOCK;
        if b < self.bits.len() {
            self.bits[b] &= !(1u64 << (v % BLOCK));
            self.trim();
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        let b = v / BLOCK;
        b < self.bits.len() && self.bits[b] >> (v % BLOCK) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Smallest member, if any. Used as the canonical key of equivalence
    /// classes and cliques.
    pub fn min_elem(&self) -> Option<usize> {
        self.bits
            .iter()
            .position(|&b| b != 0)
            .map(|i| i * BLOCK + self.bits[i].trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &b)| {
            let mut rest = b;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let t = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(i * BLOCK + t)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        if other.bits.len() > self.bits.len() {
            self.bits.resize(other.bits.len(), 0);
        }
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        for (i, a) in self.bits.iter_mut().enumerate() {
            *a &= other.bits.get(i).copied().unwrap_or(0);
        }
        self.trim();
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        for (i, a) in self.bits.iter_mut().enumerate() {
            *a &= !other.bits.get(i).copied().unwrap_or(0);
        }
        self.trim();
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.bits
            .iter()
            .enumerate()
            .all(|(i, &b)| b & !other.bits.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn is_disjoint_from(&self, other: &VertexSet) -> bool {
        self.bits
            .iter()
            .zip(&other.bits)
            .all(|(a, b)| a & b == 0)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::new();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(vs: [usize; N]) -> Self {
        vs.into_iter().collect()
    }
}

/// Canonical order: lexicographic on the ascending member sequence,
/// e.g. {0,5} < {1,2} < {1,2,3}.
impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_ops() {
        let mut s = VertexSet::new();
        assert!(s.is_empty());
        s.insert(3);
        s.insert(70);
        s.insert(3);
        assert_eq!(s.len(), 2);
        assert_eq!(s.to_vec(), vec![3, 70]);
        assert_eq!(s.min_elem(), Some(3));
        s.remove(3);
        assert_eq!(s.to_vec(), vec![70]);
        s.remove(70);
        assert!(s.is_empty());
        assert_eq!(s, VertexSet::new());
    }

    #[test]
    fn canonical_order() {
        let a: VertexSet = [0, 5].into();
        let b: VertexSet = [1, 2].into();
        let c: VertexSet = [1, 2, 3].into();
        assert!(a < b);
        assert!(b < c);
    }

    #[test]
    fn full_set() {
        assert_eq!(VertexSet::full(0).len(), 0);
        assert_eq!(VertexSet::full(64).len(), 64);
        assert_eq!(VertexSet::full(65).len(), 65);
        assert!(VertexSet::full(65).contains(64));
    }

    proptest! {
        #[test]
        fn set_algebra_matches_reference(
            a in proptest::collection::btree_set(0usize..150, 0..20),
            b in proptest::collection::btree_set(0usize..150, 0..20),
        ) {
            let sa: VertexSet = a.iter().copied().collect();
            let sb: VertexSet = b.iter().copied().collect();
            let union: Vec<usize> = a.union(&b).copied().collect();
            let inter: Vec<usize> = a.intersection(&b).copied().collect();
            let diff: Vec<usize> = a.difference(&b).copied().collect();
            prop_assert_eq!(sa.union(&sb).to_vec(), union);
            prop_assert_eq!(sa.intersection(&sb).to_vec(), inter);
            prop_assert_eq!(sa.difference(&sb).to_vec(), diff);
            prop_assert_eq!(sa.is_subset_of(&sb), a.is_subset(&b));
            prop_assert_eq!(sa.is_disjoint_from(&sb), a.is_disjoint(&b));
        }
    }
}
