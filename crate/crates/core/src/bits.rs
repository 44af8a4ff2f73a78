//! Fixed-width bitsets over a ground set, plus the word-slice kernels the
//! rest of the crate runs its inner loops on.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

pub(crate) type Words = SmallVec<[u64; 2]>;

/// Number of 64-bit words needed for `points` bits.
#[inline]
pub fn words_for(points: usize) -> usize {
    points.div_ceil(64).max(1)
}

/// A subset of a ground set, stored as a bitset of fixed width.
///
/// Two member sets are only comparable when they were built for the same
/// ground size; all constructors in this crate guarantee that.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MemberSet {
    words: Words,
}

impl MemberSet {
    pub fn empty(points: usize) -> Self {
        MemberSet {
            words: SmallVec::from_elem(0, words_for(points)),
        }
    }

    /// Set with every index in `0..points`.
    pub fn full(points: usize) -> Self {
        let mut set = MemberSet::empty(points);
        for i in 0..points {
            set.insert(i);
        }
        set
    }

    /// Builds a set from point indices; indices must lie below `points`.
    pub fn from_indices<I: IntoIterator<Item = usize>>(points: usize, indices: I) -> Self {
        let mut set = MemberSet::empty(points);
        for i in indices {
            assert!(i < points, "point index {i} outside ground of size {points}");
            set.insert(i);
        }
        set
    }

    pub(crate) fn from_words(words: &[u64]) -> Self {
        MemberSet {
            words: SmallVec::from_slice(words),
        }
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i / 64 < self.words.len() && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        count(&self.words)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Point indices in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        iter_ones(&self.words)
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn union(&self, other: &MemberSet) -> MemberSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn union_with(&mut self, other: &MemberSet) {
        union_into(&mut self.words, &other.words);
    }

    pub fn intersection(&self, other: &MemberSet) -> MemberSet {
        MemberSet {
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn difference(&self, other: &MemberSet) -> MemberSet {
        MemberSet {
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(a, b)| a & !b)
                .collect(),
        }
    }

    /// Complement inside a ground set of `points` points.
    pub fn complement(&self, points: usize) -> MemberSet {
        let full = MemberSet::full(points);
        full.difference(self)
    }

    pub fn is_subset(&self, other: &MemberSet) -> bool {
        is_subset(&self.words, &other.words)
    }

    pub fn is_disjoint(&self, other: &MemberSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & b == 0)
    }

    pub fn intersection_len(&self, other: &MemberSet) -> usize {
        self.words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Lexicographic comparison of the sorted index lists.
    pub fn lex_cmp(&self, other: &MemberSet) -> Ordering {
        lex_cmp(&self.words, &other.words)
    }
}

impl fmt::Debug for MemberSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[inline]
pub(crate) fn count(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
pub(crate) fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| x & !y == 0)
}

#[inline]
pub(crate) fn union_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src.iter()) {
        *d |= s;
    }
}

pub(crate) fn iter_ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut rest = w;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * 64 + bit)
            }
        })
    })
}

/// Compares two sets as sorted index lists.
///
/// Below the lowest differing point `d` both lists agree. The set holding `d`
/// is smaller exactly when the other one still has some point above `d`;
/// otherwise the other list is a proper prefix of it.
pub(crate) fn lex_cmp(a: &[u64], b: &[u64]) -> Ordering {
    let Some(wi) = (0..a.len()).find(|&i| a[i] != b[i]) else {
        return Ordering::Equal;
    };
    let diff = a[wi] ^ b[wi];
    let bit = diff.trailing_zeros();
    let above_mask = if bit == 63 { 0 } else { !0u64 << (bit + 1) };
    let a_has = a[wi] & (1 << bit) != 0;
    let (holder_is_a, other) = if a_has { (true, b) } else { (false, a) };
    let other_continues = other[wi] & above_mask != 0 || other[wi + 1..].iter().any(|&w| w != 0);
    let holder_smaller = other_continues;
    match (holder_is_a, holder_smaller) {
        (true, true) | (false, false) => Ordering::Less,
        _ => Ordering::Greater,
    }
}
