//! Sunflower detection and the matching-or-cover dichotomy.
//!
//! A sunflower S(r,t,k) inside an r-uniform hypergraph is a set of k distinct
//! edges whose pairwise intersections all equal one common kernel of size t.
//! Equivalently: the link graph of the kernel contains k pairwise-disjoint
//! edges. Detection therefore reduces to maximum matching in link graphs,
//! and the greedy pass yields the dichotomy used by the cover machinery: a
//! maximal disjoint collection either reaches size k or its vertex union
//! (at most (k-1) * uniformity vertices) hits every edge.
//!
//! All search order is fixed by the canonical edge order, so every routine
//! here is deterministic; ties resolve to the lexicographically least kernel
//! and then the lexicographically least matching.

use crate::combin::k_subsets_of;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::vertexset::VertexSet;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// A fully explicit sunflower: kernel plus the k petals (edge remainders).
/// The original edges are `kernel | petal_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SunflowerWitness {
    pub kernel: VertexSet,
    pub petals: Vec<VertexSet>,
    pub t: usize,
    pub k: usize,
}

impl SunflowerWitness {
    pub fn edges(&self) -> Vec<VertexSet> {
        self.petals.iter().map(|p| self.kernel.union(p)).collect()
    }

    /// Checks every structural invariant against the host hypergraph.
    pub fn verify(&self, h: &Hypergraph) -> std::result::Result<(), String> {
        if self.kernel.len() != self.t {
            return Err(format!(
                "kernel {} has size {}, expected {}",
                self.kernel,
                self.kernel.len(),
                self.t
            ));
        }
        if self.petals.len() != self.k {
            return Err(format!(
                "{} petals, expected {}",
                self.petals.len(),
                self.k
            ));
        }
        for (i, p) in self.petals.iter().enumerate() {
            if p.len() + self.t != h.r() {
                return Err(format!("petal {i} has size {}", p.len()));
            }
            if !p.is_disjoint(&self.kernel) {
                return Err(format!("petal {i} meets the kernel"));
            }
            if !h.contains_edge(&self.kernel.union(p)) {
                return Err(format!("kernel | petal {i} is not an edge"));
            }
            for q in &self.petals[..i] {
                if !p.is_disjoint(q) {
                    return Err(format!("petal {i} meets an earlier petal"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchingOrCover {
    /// k pairwise-disjoint edges of the link graph.
    Matching(Vec<VertexSet>),
    /// A vertex set of size at most (k-1) * uniformity hitting every edge.
    Cover(VertexSet),
}

impl MatchingOrCover {
    pub fn verify(&self, l: &Hypergraph, k: usize) -> std::result::Result<(), String> {
        match self {
            MatchingOrCover::Matching(es) => {
                if es.len() != k {
                    return Err(format!("matching has {} edges, expected {k}", es.len()));
                }
                for (i, e) in es.iter().enumerate() {
                    if !l.contains_edge(e) {
                        return Err(format!("matching member {e} is not an edge"));
                    }
                    for f in &es[..i] {
                        if !e.is_disjoint(f) {
                            return Err(format!("matching members {e} and {f} intersect"));
                        }
                    }
                }
                Ok(())
            }
            MatchingOrCover::Cover(c) => {
                if c.len() > (k - 1) * l.r() {
                    return Err(format!(
                        "cover has {} vertices, bound is {}",
                        c.len(),
                        (k - 1) * l.r()
                    ));
                }
                for e in l.edges() {
                    if e.is_disjoint(c) {
                        return Err(format!("edge {e} avoids the cover"));
                    }
                }
                Ok(())
            }
        }
    }
}

/// Grows a maximal disjoint edge collection in canonical order. Reaching k
/// edges yields the matching branch; otherwise the union of the collection
/// is a cover of at most (k-1) * r(L) vertices, because every edge meets the
/// collection by maximality.
///
/// 0-uniform links are degenerate: an empty link is covered by the empty
/// set, a single empty edge is a matching for k = 1, but for k >= 2 neither
/// branch exists and the call fails loudly.
pub fn greedy_matching_or_cover(l: &Hypergraph, k: usize) -> Result<MatchingOrCover> {
    if k == 0 {
        return Err(Error::invalid("matching target k must be at least 1"));
    }
    if l.r() == 0 {
        return if l.edge_count() == 0 {
            Ok(MatchingOrCover::Cover(VertexSet::new()))
        } else if k == 1 {
            Ok(MatchingOrCover::Matching(vec![VertexSet::new()]))
        } else {
            Err(Error::UncoverableDegenerate)
        };
    }
    let mut collection = Vec::new();
    let mut used = VertexSet::new();
    for e in l.edges() {
        if e.is_disjoint(&used) {
            used = used.union(e);
            collection.push(e.clone());
            if collection.len() == k {
                return Ok(MatchingOrCover::Matching(collection));
            }
        }
    }
    Ok(MatchingOrCover::Cover(used))
}

/// Upper bound on how many further disjoint edges fit among `cand`:
/// every one of them hits the vertex union of a greedy maximal matching
/// (cover bound), and disjointness caps the count by available vertices.
fn extension_bound(edges: &[VertexSet], cand: &[usize], u: usize) -> usize {
    let mut cover = VertexSet::new();
    let mut union = VertexSet::new();
    for &i in cand {
        if edges[i].is_disjoint(&cover) {
            cover = cover.union(&edges[i]);
        }
        union = union.union(&edges[i]);
    }
    cover.len().min(union.len() / u).min(cand.len())
}

fn matching_dfs(
    edges: &[VertexSet],
    u: usize,
    cand: &[usize],
    chosen: &mut Vec<usize>,
    best: &mut Vec<usize>,
    goal: usize,
) {
    if chosen.len() > best.len() {
        *best = chosen.clone();
    }
    if best.len() >= goal {
        return;
    }
    if chosen.len() + extension_bound(edges, cand, u) <= best.len() {
        return;
    }
    for (pos, &i) in cand.iter().enumerate() {
        let rest: Vec<usize> = cand[pos + 1..]
            .iter()
            .copied()
            .filter(|&j| edges[j].is_disjoint(&edges[i]))
            .collect();
        chosen.push(i);
        matching_dfs(edges, u, &rest, chosen, best, goal);
        chosen.pop();
        if best.len() >= goal {
            return;
        }
    }
}

/// Maximum matching over an explicit edge list (branch and bound, canonical
/// index order, early exit at `goal`). Returns the chosen indices; when the
/// result has at least `goal` edges it is the lexicographically least
/// matching of size exactly `goal` rather than a maximum one.
pub(crate) fn max_matching_indices(edges: &[VertexSet], u: usize, goal: usize) -> Vec<usize> {
    if u == 0 {
        // Only the empty edge exists; a single copy is the whole matching.
        return if edges.is_empty() { vec![] } else { vec![0] };
    }
    let all: Vec<usize> = (0..edges.len()).collect();
    let mut best = Vec::new();
    let mut chosen = Vec::new();
    matching_dfs(edges, u, &all, &mut chosen, &mut best, goal.max(1));
    best
}

/// Exact maximum matching in a link graph, early-exiting once `goal`
/// pairwise-disjoint edges are found. With an unreachable goal the result is
/// a true maximum matching.
pub fn max_matching_exact(l: &Hypergraph, goal: usize) -> Vec<VertexSet> {
    max_matching_indices(l.edges(), l.r(), goal)
        .into_iter()
        .map(|i| l.edges()[i].clone())
        .collect()
}

fn kernel_candidates(h: &Hypergraph, t: usize) -> BTreeSet<VertexSet> {
    let mut kernels = BTreeSet::new();
    for e in h.edges() {
        for s in k_subsets_of(e, t) {
            kernels.insert(s);
        }
    }
    kernels
}

fn witness_at_kernel(
    h: &Hypergraph,
    kernel: &VertexSet,
    t: usize,
    k: usize,
) -> Option<SunflowerWitness> {
    let link = h
        .link_graph(kernel)
        .expect("kernel is a subset of an edge");
    if link.edge_count() < k {
        return None;
    }
    let matching = max_matching_exact(&link, k);
    if matching.len() < k {
        return None;
    }
    let w = SunflowerWitness {
        kernel: kernel.clone(),
        petals: matching[..k].to_vec(),
        t,
        k,
    };
    debug_assert_eq!(w.verify(h), Ok(()));
    Some(w)
}

fn check_find_args(h: &Hypergraph, t: usize, k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::invalid("a sunflower needs at least k = 2 petals"));
    }
    if t >= h.r() {
        return Err(Error::invalid(format!(
            "kernel size {t} must be smaller than the uniformity {}",
            h.r()
        )));
    }
    Ok(())
}

/// Finds an S(r,t,k) sunflower, or proves there is none. Only t-sets that
/// actually occur inside edges can be kernels, so those are the only
/// candidates scanned; `None` is therefore an exact freeness certificate.
/// The witness has the lexicographically least kernel, and for that kernel
/// the lexicographically least matching.
pub fn find_sunflower(h: &Hypergraph, t: usize, k: usize) -> Result<Option<SunflowerWitness>> {
    check_find_args(h, t, k)?;
    for kernel in kernel_candidates(h, t) {
        if let Some(w) = witness_at_kernel(h, &kernel, t, k) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Same result as [`find_sunflower`], scanning kernel blocks on worker
/// threads. Blocks are contiguous in kernel order, and a hit in one block
/// only cancels the blocks after it, so the returned witness is identical
/// to the sequential one for every thread count.
pub fn find_sunflower_parallel(
    h: &Hypergraph,
    t: usize,
    k: usize,
    threads: usize,
) -> Result<Option<SunflowerWitness>> {
    check_find_args(h, t, k)?;
    let kernels: Vec<VertexSet> = kernel_candidates(h, t).into_iter().collect();
    let threads = threads.max(1).min(kernels.len().max(1));
    if threads == 1 {
        for kernel in &kernels {
            if let Some(w) = witness_at_kernel(h, kernel, t, k) {
                return Ok(Some(w));
            }
        }
        return Ok(None);
    }

    let lowest_hit = AtomicUsize::new(usize::MAX);
    let found: Mutex<Vec<Option<SunflowerWitness>>> = Mutex::new(vec![None; threads]);
    let chunk = kernels.len().div_ceil(threads);
    std::thread::scope(|scope| {
        for (block, slice) in kernels.chunks(chunk).enumerate() {
            let lowest_hit = &lowest_hit;
            let found = &found;
            scope.spawn(move || {
                for kernel in slice {
                    if lowest_hit.load(Ordering::Relaxed) < block {
                        return;
                    }
                    if let Some(w) = witness_at_kernel(h, kernel, t, k) {
                        found.lock().unwrap()[block] = Some(w);
                        lowest_hit.fetch_min(block, Ordering::Relaxed);
                        return;
                    }
                }
            });
        }
    });
    let mut found = found.into_inner().unwrap();
    Ok(found.iter_mut().find_map(|slot| slot.take()))
}

/// Freeness for every kernel size in `kernel_sizes` at once. Returns the
/// first witness in ascending kernel-size order, or `None` when the
/// hypergraph avoids S(r,t,k) for every listed t.
pub fn is_free_multi(
    h: &Hypergraph,
    kernel_sizes: &BTreeSet<usize>,
    k: usize,
) -> Result<Option<SunflowerWitness>> {
    for &t in kernel_sizes {
        if t >= h.r() {
            return Err(Error::invalid(format!(
                "kernel size {t} must be smaller than the uniformity {}",
                h.r()
            )));
        }
    }
    for &t in kernel_sizes {
        if let Some(w) = find_sunflower(h, t, k)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// One row of [`LinkBoundReport`]: the worst link degree seen among vertex
/// sets of one size, against the bound (r*k)^(r - size).
#[derive(Clone, Debug)]
pub struct LevelBound {
    pub size: usize,
    pub sets_seen: usize,
    pub max_link: usize,
    pub worst_set: Option<VertexSet>,
    pub bound: BigUint,
    pub within: bool,
}

#[derive(Clone, Debug)]
pub struct LinkBoundReport {
    pub ell: usize,
    pub k: usize,
    pub levels: Vec<LevelBound>,
    pub edge_count: usize,
    /// n^ell * (r*k)^(r - ell), the total-size bound implied by the levels.
    pub edge_bound: BigUint,
    pub ok: bool,
}

pub enum StarBoundOutcome {
    Report(LinkBoundReport),
    /// The freeness precondition failed; here is the sunflower.
    Violation(SunflowerWitness),
}

/// Checks the link-size bounds that hold in hypergraphs free of S(r,s,k)
/// for every s in ell..r: each vertex set S with ell <= |S| <= r satisfies
/// |L_S| <= (r*k)^(r-|S|), and the total edge count is at most
/// n^ell * (r*k)^(r-ell). Vertex sets not contained in any edge have empty
/// links, so only subsets of edges are tallied.
pub fn forbidden_star_edge_bound(
    h: &Hypergraph,
    ell: usize,
    k: usize,
) -> Result<StarBoundOutcome> {
    let r = h.r();
    if ell == 0 || ell >= r {
        return Err(Error::invalid(format!(
            "level ell must satisfy 1 <= ell < r, got ell={ell}, r={r}"
        )));
    }
    if k < 2 {
        return Err(Error::invalid("a sunflower needs at least k = 2 petals"));
    }
    let sizes: BTreeSet<usize> = (ell..r).collect();
    if let Some(w) = is_free_multi(h, &sizes, k)? {
        return Ok(StarBoundOutcome::Violation(w));
    }

    let rk = BigUint::from(r as u64 * k as u64);
    let mut ok = true;
    let mut levels = Vec::new();
    for size in ell..=r {
        let mut counts: BTreeMap<VertexSet, usize> = BTreeMap::new();
        for e in h.edges() {
            for s in k_subsets_of(e, size) {
                *counts.entry(s).or_insert(0) += 1;
            }
        }
        let bound = rk.pow((r - size) as u32);
        let mut max_link = 0usize;
        let mut worst_set = None;
        for (s, c) in &counts {
            if *c > max_link {
                max_link = *c;
                worst_set = Some(s.clone());
            }
        }
        let within = BigUint::from(max_link as u64) <= bound;
        ok &= within;
        levels.push(LevelBound {
            size,
            sets_seen: counts.len(),
            max_link,
            worst_set,
            bound,
            within,
        });
    }
    let edge_bound = BigUint::from(h.n() as u64).pow(ell as u32) * rk.pow((r - ell) as u32);
    ok &= BigUint::from(h.edge_count() as u64) <= edge_bound;
    Ok(StarBoundOutcome::Report(LinkBoundReport {
        ell,
        k,
        levels,
        edge_count: h.edge_count(),
        edge_bound,
        ok,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::k_subsets;
    use itertools::Itertools;

    fn hg(n: u32, edges: &[&[u32]]) -> Hypergraph {
        let r = edges.first().map_or(0, |e| e.len());
        Hypergraph::new(
            n,
            r,
            edges
                .iter()
                .map(|e| VertexSet::from_ids(e.iter().copied()))
                .collect(),
        )
        .unwrap()
    }

    /// Blunt reference search: every (kernel, k-subset-of-edges) pair, in
    /// lexicographic order, checked directly against the definition.
    fn naive_find(
        h: &Hypergraph,
        t: usize,
        k: usize,
    ) -> Option<(VertexSet, Vec<VertexSet>)> {
        let ids: Vec<u32> = (1..=h.n()).collect();
        for kernel in k_subsets(&ids, t) {
            for combo in h.edges().iter().combinations(k) {
                let ok = combo.iter().all(|e| kernel.is_subset(e))
                    && combo
                        .iter()
                        .tuple_combinations()
                        .all(|(a, b)| a.intersection(b) == kernel);
                if ok {
                    return Some((kernel, combo.into_iter().cloned().collect()));
                }
            }
        }
        None
    }

    fn brute_max_matching(edges: &[VertexSet]) -> usize {
        let m = edges.len();
        let mut best = 0;
        for mask in 0u32..1 << m {
            let picked: Vec<&VertexSet> = (0..m)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| &edges[i])
                .collect();
            let disjoint = picked
                .iter()
                .tuple_combinations()
                .all(|(a, b)| a.is_disjoint(b));
            if disjoint {
                best = best.max(picked.len());
            }
        }
        best
    }

    #[test]
    fn greedy_examples() {
        let l = hg(3, &[&[1, 2], &[2, 3], &[1, 3]]);
        match greedy_matching_or_cover(&l, 2).unwrap() {
            MatchingOrCover::Cover(c) => {
                assert_eq!(c.vertices(), vec![1, 2]);
                assert_eq!(
                    MatchingOrCover::Cover(c).verify(&l, 2),
                    Ok(())
                );
            }
            other => panic!("expected cover, got {other:?}"),
        }

        let star = hg(4, &[&[1, 2], &[1, 3], &[1, 4]]);
        match greedy_matching_or_cover(&star, 2).unwrap() {
            MatchingOrCover::Cover(c) => assert_eq!(c.vertices(), vec![1, 2]),
            other => panic!("expected cover, got {other:?}"),
        }

        let matched = hg(4, &[&[1, 2], &[3, 4]]);
        match greedy_matching_or_cover(&matched, 2).unwrap() {
            MatchingOrCover::Matching(es) => assert_eq!(es.len(), 2),
            other => panic!("expected matching, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_zero_uniform() {
        let empty = Hypergraph::empty(3, 0);
        assert!(matches!(
            greedy_matching_or_cover(&empty, 2).unwrap(),
            MatchingOrCover::Cover(c) if c.is_empty()
        ));
        let loop_edge = Hypergraph::new(3, 0, vec![VertexSet::new()]).unwrap();
        assert!(matches!(
            greedy_matching_or_cover(&loop_edge, 1).unwrap(),
            MatchingOrCover::Matching(es) if es.len() == 1
        ));
        assert!(matches!(
            greedy_matching_or_cover(&loop_edge, 2),
            Err(Error::UncoverableDegenerate)
        ));
    }

    #[test]
    fn exact_matching_agrees_with_brute_force() {
        // Deterministic pseudo-random small instances, up to 12 edges.
        let mut state = 0x243f6a8885a308d3u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for trial in 0..200 {
            let n = 3 + (next() % 6) as u32;
            let r = 1 + (next() % 3) as usize;
            if (r as u32) > n {
                continue;
            }
            let complete = Hypergraph::complete(n, r).unwrap();
            let m = (next() % 13) as usize;
            let mut edges: Vec<VertexSet> = Vec::new();
            for _ in 0..m {
                let e = complete.edges()[(next() as usize) % complete.edge_count()].clone();
                if !edges.contains(&e) {
                    edges.push(e);
                }
            }
            let l = Hypergraph::new(n, r, edges.clone()).unwrap();
            let expect = brute_max_matching(l.edges());
            let got = max_matching_exact(&l, usize::MAX).len();
            assert_eq!(got, expect, "trial {trial}: {l:?}");
        }
    }

    #[test]
    fn early_exit_returns_lex_least() {
        let l = hg(6, &[&[1, 2], &[1, 3], &[3, 4], &[5, 6]]);
        let m = max_matching_exact(&l, 2);
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].vertices(), vec![1, 2]);
        assert_eq!(m[1].vertices(), vec![3, 4]);
    }

    #[test]
    fn find_matches_naive_on_samples() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..150 {
            let n = 3 + (next() % 6) as u32; // up to 8
            let r = 2 + (next() % 3) as usize; // up to 4
            if (r as u32) > n {
                continue;
            }
            let complete = Hypergraph::complete(n, r).unwrap();
            let mut edges: Vec<VertexSet> = Vec::new();
            for e in complete.edges() {
                if next() % 3 == 0 && edges.len() < 12 {
                    edges.push(e.clone());
                }
            }
            let h = Hypergraph::new(n, r, edges).unwrap();
            for t in 0..r {
                for k in 2..=3 {
                    let ours = find_sunflower(&h, t, k).unwrap();
                    let naive = naive_find(&h, t, k);
                    assert_eq!(ours.is_some(), naive.is_some(), "h={h:?} t={t} k={k}");
                    if let (Some(w), Some((kernel, edges))) = (ours, naive) {
                        assert_eq!(w.kernel, kernel, "kernel tie-break");
                        let naive_petals: Vec<VertexSet> =
                            edges.iter().map(|e| e.difference(&kernel)).collect();
                        assert_eq!(w.petals, naive_petals, "petal tie-break");
                        assert_eq!(w.verify(&h), Ok(()));
                    }
                }
            }
        }
    }

    #[test]
    fn parallel_find_matches_sequential() {
        let h = Hypergraph::complete(7, 3).unwrap();
        for t in 0..3 {
            for threads in [1, 2, 4, 8] {
                let seq = find_sunflower(&h, t, 2).unwrap();
                let par = find_sunflower_parallel(&h, t, 2, threads).unwrap();
                assert_eq!(seq, par, "t={t}, threads={threads}");
            }
        }
    }

    #[test]
    fn witness_json_shape() {
        let h = hg(5, &[&[1, 2, 3], &[1, 2, 4], &[1, 2, 5]]);
        let w = find_sunflower(&h, 2, 3).unwrap().unwrap();
        let json = serde_json::to_value(&w).unwrap();
        assert_eq!(json["kernel"], serde_json::json!([1, 2]));
        assert_eq!(json["petals"], serde_json::json!([[3], [4], [5]]));
        assert_eq!(json["t"], 2);
        assert_eq!(json["k"], 3);
    }

    #[test]
    fn monotone_in_k() {
        let h = Hypergraph::complete(8, 3).unwrap();
        for t in 0..3 {
            let big = find_sunflower(&h, t, 4).unwrap();
            if big.is_some() {
                assert!(find_sunflower(&h, t, 2).unwrap().is_some());
                assert!(find_sunflower(&h, t, 3).unwrap().is_some());
            }
        }
    }

    #[test]
    fn free_multi_and_star_bound() {
        // Perfect matching on 6 vertices: every link degree is 1 <= rk = 4,
        // total 3 <= 6 * 4.
        let pm = hg(6, &[&[1, 2], &[3, 4], &[5, 6]]);
        let sizes: BTreeSet<usize> = [1].into_iter().collect();
        assert!(is_free_multi(&pm, &sizes, 2).unwrap().is_none());
        match forbidden_star_edge_bound(&pm, 1, 2).unwrap() {
            StarBoundOutcome::Report(rep) => {
                assert!(rep.ok);
                assert_eq!(rep.edge_count, 3);
                assert_eq!(rep.edge_bound, BigUint::from(24u32));
                assert_eq!(rep.levels[0].max_link, 1);
            }
            StarBoundOutcome::Violation(w) => panic!("unexpected violation {w:?}"),
        }

        // A 2-star violates the freeness precondition for k = 2.
        let star = hg(3, &[&[1, 2], &[1, 3]]);
        match forbidden_star_edge_bound(&star, 1, 2).unwrap() {
            StarBoundOutcome::Violation(w) => {
                assert_eq!(w.kernel, VertexSet::singleton(1));
            }
            StarBoundOutcome::Report(_) => panic!("expected violation"),
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let h = Hypergraph::complete(4, 2).unwrap();
        assert!(find_sunflower(&h, 2, 2).is_err());
        assert!(find_sunflower(&h, 1, 1).is_err());
        assert!(forbidden_star_edge_bound(&h, 0, 2).is_err());
        assert!(forbidden_star_edge_bound(&h, 2, 2).is_err());
    }
}
