//! Compact sets of 1-based vertex ids.
//!
//! `VertexSet` is a word-level bitset. Two words live inline, so ground sets
//! with up to 128 vertices never touch the heap; larger ids spill
//! transparently. The no-trailing-zero-words canonical form makes `Eq` and
//! `Hash` structural, and `Ord` compares the ascending id sequences
//! lexicographically, which is the canonical edge order used everywhere in
//! this crate.

use serde::de::{SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct VertexSet {
    words: SmallVec<[u64; 2]>,
}

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(id: u32) -> Self {
        let mut s = Self::new();
        s.insert(id);
        s
    }

    /// Builds a set from any id iterator; duplicates collapse.
    pub fn from_ids<I: IntoIterator<Item = u32>>(ids: I) -> Self {
        let mut s = Self::new();
        for id in ids {
            s.insert(id);
        }
        s
    }

    #[inline]
    fn slot(id: u32) -> (usize, u64) {
        debug_assert!(id >= 1, "vertex ids are 1-based");
        let bit = (id - 1) as usize;
        (bit / 64, 1u64 << (bit % 64))
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn insert(&mut self, id: u32) {
        let (w, mask) = Self::slot(id);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= mask;
    }

    pub fn remove(&mut self, id: u32) {
        let (w, mask) = Self::slot(id);
        if w < self.words.len() {
            self.words[w] &= !mask;
            self.trim();
        }
    }

    pub fn contains(&self, id: u32) -> bool {
        let (w, mask) = Self::slot(id);
        self.words.get(w).is_some_and(|word| word & mask != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn union(&self, other: &Self) -> Self {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (i, w) in short.words.iter().enumerate() {
            words[i] |= w;
        }
        Self { words }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let n = self.words.len().min(other.words.len());
        let mut out = Self {
            words: self.words[..n]
                .iter()
                .zip(&other.words[..n])
                .map(|(a, b)| a & b)
                .collect(),
        };
        out.trim();
        out
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut words = self.words.clone();
        for (i, w) in other.words.iter().enumerate().take(words.len()) {
            words[i] &= !w;
        }
        let mut out = Self { words };
        out.trim();
        out
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        let n = self.words.len().min(other.words.len());
        self.words[..n]
            .iter()
            .zip(&other.words[..n])
            .all(|(a, b)| a & b == 0)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        if self.words.len() > other.words.len() {
            return false;
        }
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersection_len(&self, other: &Self) -> usize {
        let n = self.words.len().min(other.words.len());
        self.words[..n]
            .iter()
            .zip(&other.words[..n])
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Ascending iterator over the 1-based ids.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            word_idx: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn vertices(&self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn max_id(&self) -> Option<u32> {
        let w = self.words.len().checked_sub(1)?;
        let top = 63 - self.words[w].leading_zeros();
        Some((w as u32) * 64 + top + 1)
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        while self.current == 0 {
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
        let bit = self.current.trailing_zeros();
        self.current &= self.current - 1;
        Some(self.word_idx as u32 * 64 + bit + 1)
    }
}

impl FromIterator<u32> for VertexSet {
    fn from_iter<I: IntoIterator<Item = u32>>(ids: I) -> Self {
        Self::from_ids(ids)
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, id) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{id}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for id in self.iter() {
            seq.serialize_element(&id)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = VertexSet;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a sequence of positive vertex ids")
            }

            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<VertexSet, A::Error> {
                let mut out = VertexSet::new();
                while let Some(id) = seq.next_element::<u32>()? {
                    if id == 0 {
                        return Err(serde::de::Error::custom("vertex ids are 1-based"));
                    }
                    out.insert(id);
                }
                Ok(out)
            }
        }
        deserializer.deserialize_seq(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a = VertexSet::from_ids([3, 1, 7]);
        let b = VertexSet::from_ids([7, 9]);
        assert_eq!(a.len(), 3);
        assert!(a.contains(1) && a.contains(3) && a.contains(7));
        assert!(!a.contains(2));
        assert_eq!(a.vertices(), vec![1, 3, 7]);
        assert_eq!(a.intersection(&b).vertices(), vec![7]);
        assert_eq!(a.union(&b).vertices(), vec![1, 3, 7, 9]);
        assert_eq!(a.difference(&b).vertices(), vec![1, 3]);
        assert!(!a.is_disjoint(&b));
        assert!(a.intersection(&b).is_subset(&a));
        assert_eq!(a.intersection_len(&b), 1);
        assert_eq!(a.max_id(), Some(7));
    }

    #[test]
    fn canonical_after_removal() {
        let mut a = VertexSet::from_ids([1, 200]);
        a.remove(200);
        assert_eq!(a, VertexSet::singleton(1));
        let mut h = std::collections::HashSet::new();
        h.insert(a.clone());
        assert!(h.contains(&VertexSet::singleton(1)));
    }

    #[test]
    fn spills_past_inline_capacity() {
        let a = VertexSet::from_ids([1, 129, 400]);
        assert_eq!(a.vertices(), vec![1, 129, 400]);
        assert_eq!(a.max_id(), Some(400));
        assert!(VertexSet::singleton(400).is_subset(&a));
    }

    #[test]
    fn order_is_lexicographic_on_ascending_lists() {
        let e12 = VertexSet::from_ids([1, 2]);
        let e13 = VertexSet::from_ids([1, 3]);
        let e123 = VertexSet::from_ids([1, 2, 3]);
        let e2 = VertexSet::singleton(2);
        assert!(e12 < e13);
        assert!(e12 < e123);
        assert!(e13 < e2);
        assert!(VertexSet::new() < e12);
    }

    #[test]
    fn serde_round_trip() {
        let a = VertexSet::from_ids([2, 5, 9]);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, "[2,5,9]");
        let back: VertexSet = serde_json::from_str(&json).unwrap();
        assert_eq!(a, back);
    }
}
