//! Small combinatorial helpers shared across the crate.

use crate::vertexset::VertexSet;
use itertools::Itertools;
use num_bigint::BigUint;

/// Exact binomial coefficient in u128. Panics on overflow, which does not
/// occur at the parameter scales this crate accepts.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .expect("binomial overflow in u128");
        acc /= (i + 1) as u128;
    }
    acc
}

pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// All k-element subsets of `ids` (assumed strictly increasing), in
/// lexicographic order of their ascending id lists.
pub fn k_subsets(ids: &[u32], k: usize) -> Vec<VertexSet> {
    if k > ids.len() {
        return Vec::new();
    }
    ids.iter()
        .copied()
        .combinations(k)
        .map(VertexSet::from_ids)
        .collect()
}

/// k-element subsets of `set`, lexicographic.
pub fn k_subsets_of(set: &VertexSet, k: usize) -> Vec<VertexSet> {
    k_subsets(&set.vertices(), k)
}

/// Rank of a t-subset of {1..n} in the lexicographic order of ascending id
/// lists, starting at 0. Inverse of walking `k_subsets(&(1..=n), t)`.
pub fn lex_rank(set: &VertexSet, n: u32, t: usize) -> usize {
    debug_assert_eq!(set.len(), t);
    let mut rank: u128 = 0;
    let mut prev = 0u32;
    let mut remaining = t;
    for (i, c) in set.iter().enumerate() {
        for skipped in prev + 1..c {
            rank += binomial((n - skipped) as u64, (t - i - 1) as u64);
        }
        prev = c;
        remaining -= 1;
    }
    debug_assert_eq!(remaining, 0);
    rank as usize
}
