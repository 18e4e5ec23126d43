//! Fixed-width bit vector used for object rows, attribute columns, extents and intents.

use std::cmp::Ordering;
use std::fmt;

use smallvec::{smallvec, SmallVec};

type Word = u64;
const WORD_BITS: usize = Word::BITS as usize;

/// A fixed-width set of indices `0..len`.
///
/// Bits at positions `>= len` are always zero, so derived equality and hashing
/// only depend on the logical contents.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitSet {
    len: usize,
    words: SmallVec<[Word; 2]>,
}

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

#[inline]
fn split(i: usize) -> (usize, Word) {
    (i / WORD_BITS, 1 << (i % WORD_BITS))
}

#[allow(clippy::len_without_is_empty)]
impl BitSet {
    /// Empty set of width `len`.
    pub fn new(len: usize) -> Self {
        BitSet {
            len,
            words: smallvec![0; words_for(len)],
        }
    }

    /// Set containing every index below `len`.
    pub fn full(len: usize) -> Self {
        let mut s = BitSet {
            len,
            words: smallvec![Word::MAX; words_for(len)],
        };
        s.clear_tail();
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
        let mut s = BitSet::new(len);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        BitSet::from_indices(
            bits.len(),
            bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i),
        )
    }

    /// Parses a `0`/`1` string; position `i` of the string is bit `i`.
    pub fn from_bit_str(s: &str) -> Option<Self> {
        let mut set = BitSet::new(s.len());
        for (i, c) in s.bytes().enumerate() {
            match c {
                b'1' => set.insert(i),
                b'0' => {}
                _ => return None,
            }
        }
        Some(set)
    }

    /// Width of the set (the size of its universe).
    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    /// Number of members.
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// True when no index is a member.
    pub fn is_clear(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.len
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        if i >= self.len {
            return false;
        }
        let (w, mask) = split(i);
        self.words[w] & mask != 0
    }

    /// Panics if `i` is outside the width.
    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} outside width {}", self.len);
        let (w, mask) = split(i);
        self.words[w] |= mask;
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        if i < self.len {
            let (w, mask) = split(i);
            self.words[w] &= !mask;
        }
    }

    pub fn set(&mut self, i: usize, value: bool) {
        if value {
            self.insert(i)
        } else {
            self.remove(i)
        }
    }

    /// Widens the set to `len` bits; new positions are clear.
    pub fn grow(&mut self, len: usize) {
        if len > self.len {
            self.words.resize(words_for(len), 0);
            self.len = len;
        }
    }

    /// Appends one bit at position `len()`.
    pub fn push(&mut self, value: bool) {
        let i = self.len;
        self.grow(i + 1);
        if value {
            self.insert(i);
        }
    }

    /// Copy restricted to the first `len` positions.
    pub fn truncated(&self, len: usize) -> BitSet {
        if len >= self.len {
            return self.clone();
        }
        let mut s = BitSet {
            len,
            words: SmallVec::from_slice(&self.words[..words_for(len)]),
        };
        s.clear_tail();
        s
    }

    pub fn union_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn difference_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !*b;
        }
    }

    /// Overwrites `self` with `a ∩ b`, reusing its storage.
    pub fn assign_intersection(&mut self, a: &BitSet, b: &BitSet) {
        debug_assert_eq!(a.len, b.len);
        self.len = a.len;
        self.words.clear();
        self.words
            .extend(a.words.iter().zip(&b.words).map(|(x, y)| x & y));
    }

    pub fn union(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn complement(&self) -> BitSet {
        let mut s = BitSet {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        s.clear_tail();
        s
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_superset(&self, other: &BitSet) -> bool {
        other.is_subset(self)
    }

    /// True when `self` and `other` hold the same members below position `end`.
    ///
    /// This is the canonicity test of closure enumeration.
    pub fn agrees_below(&self, other: &BitSet, end: usize) -> bool {
        let (full, rest) = (end / WORD_BITS, end % WORD_BITS);
        if self.words[..full] != other.words[..full] {
            return false;
        }
        if rest == 0 {
            return true;
        }
        let mask: Word = (1 << rest) - 1;
        (self.words[full] ^ other.words[full]) & mask == 0
    }

    /// Members in ascending order.
    pub fn ones(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    /// `0`/`1` rendering, bit 0 first.
    pub fn to_bit_string(&self) -> String {
        (0..self.len)
            .map(|i| if self.contains(i) { '1' } else { '0' })
            .collect()
    }

    fn clear_tail(&mut self) {
        let rest = self.len % WORD_BITS;
        if rest != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1 << rest) - 1;
            }
        }
    }
}

/// Orders sets as their [`BitSet::to_bit_string`] renderings compare, i.e.
/// lexicographically with bit 0 most significant and `0 < 1`.
impl Ord for BitSet {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let low = diff & diff.wrapping_neg();
                return if a & low == 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        // Equal shared words make the shorter set a prefix of the longer one.
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for BitSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitSet({})", self.to_bit_string())
    }
}

pub struct Ones<'a> {
    words: &'a [Word],
    index: usize,
    current: Word,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD_BITS + bit);
            }
            self.index += 1;
            self.current = *self.words.get(self.index)?;
        }
    }
}
