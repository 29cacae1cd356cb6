//! Generators for sunflower-free hypergraphs.
//!
//! Three families, each S(r,t,k)-free by construction:
//!
//! * [`small_kernel`]: a two-block construction for the regime r >= 2t+1.
//!   Every edge puts t+1 vertices into a fixed block B of s = max(k-1, t+1)
//!   vertices, so any candidate kernel of size t leaves two petals meeting
//!   inside B (when s = k-1 there are too few pairwise disjoint B-parts; when
//!   s = t+1 any two edges already share more than t vertices).
//! * [`large_kernel`]: a staged random construction for the regime 2t >= r.
//!   Each stage samples a small vertex pool and keeps the r-sets inside it
//!   that meet every earlier pool in at most t-1 vertices, so kernels of size
//!   t never span two stages and no single stage is large enough to hold k
//!   disjoint petals.
//! * [`clique_bound`]: the complete r-graph on min(n, t + k(r-t) - 1)
//!   vertices, too few vertices to host t + k(r-t) of them.
//!
//! All three are deterministic; `large_kernel` additionally takes a 64-bit
//! seed and reproduces the same edge set for the same inputs and seed.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combin::{binomial, binomial_big, k_subsets};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::vertexset::VertexSet;

/// Sampling schedule for [`large_kernel_with`].
///
/// Invariants: `stages >= 1`, `retry_cap >= 1`, `r <= s <= (r-t)k + t - 1`,
/// `s <= n`. The upper bound on `s` is what keeps every stage too small to
/// contain a whole sunflower; plans with a smaller `s` are accepted and only
/// lower the yield.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StagePlan {
    /// Vertices sampled per stage.
    pub s: usize,
    /// Number of stages to run.
    pub stages: u64,
    /// Seed for the stage sampler.
    pub seed: u64,
    /// Maximum resamples per stage before giving up.
    pub retry_cap: u32,
}

/// Result of [`stage_count`]. The bound degenerates at t = 0, where a single
/// stage already works for any schedule length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageCount {
    Bounded(u64),
    Unbounded,
}

impl StageCount {
    pub fn as_u64(&self) -> Option<u64> {
        match self {
            StageCount::Bounded(v) => Some(*v),
            StageCount::Unbounded => None,
        }
    }
}

impl std::fmt::Display for StageCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StageCount::Bounded(v) => write!(f, "{v}"),
            StageCount::Unbounded => write!(f, "unbounded"),
        }
    }
}

impl Serialize for StageCount {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            StageCount::Bounded(v) => ser.serialize_u64(*v),
            StageCount::Unbounded => ser.serialize_str("unbounded"),
        }
    }
}

/// Per-stage record emitted by [`large_kernel_with`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageInfo {
    /// Distinct vertices of the accepted sample, ascending.
    pub vertices: Vec<u32>,
    /// Position r-subsets of the sample whose vertices are pairwise distinct
    /// and meet every earlier stage pool in at most t-1 vertices.
    pub qualifying_tuples: usize,
    /// Distinct edges those tuples induce (>= the acceptance threshold).
    pub distinct_edges: usize,
    /// Rejected samples before this one.
    pub resamples: u32,
}

/// A [`large_kernel_with`] run: the generated hypergraph plus the schedule
/// and per-stage audit trail.
#[derive(Debug, Clone)]
pub struct LargeKernelOutput {
    pub hypergraph: Hypergraph,
    pub plan: StagePlan,
    /// ceil(C(s,r)/4): minimum distinct edges per accepted stage.
    pub threshold: usize,
    pub stages: Vec<StageInfo>,
}

fn small_kernel_params(n: u32, r: usize, t: usize, k: usize) -> Result<usize> {
    if k < 2 {
        return Err(Error::invalid(format!("small kernel requires k >= 2, got k={k}")));
    }
    if r < 2 * t + 1 {
        return Err(Error::invalid(format!(
            "small kernel requires r >= 2t + 1, got r={r} t={t}"
        )));
    }
    let s = (k - 1).max(t + 1);
    if (n as usize) < s + r - t - 1 {
        return Err(Error::invalid(format!(
            "small kernel requires n >= s + r - t - 1 = {}, got n={n}",
            s + r - t - 1
        )));
    }
    Ok(s)
}

/// Two-block S(r,t,k)-free hypergraph for r >= 2t+1: split {1..n} into
/// A = {1..n-s} and B = {n-s+1..n} with s = max(k-1, t+1), and take every
/// r-set with exactly r-t-1 vertices in A and t+1 in B.
///
/// The edge count is exactly C(n-s, r-t-1) * C(s, t+1); see
/// [`small_kernel_count`].
pub fn small_kernel(n: u32, r: usize, t: usize, k: usize) -> Result<Hypergraph> {
    let s = small_kernel_params(n, r, t, k)?;
    let a: Vec<u32> = (1..=n - s as u32).collect();
    let b: Vec<u32> = (n - s as u32 + 1..=n).collect();
    let a_parts = k_subsets(&a, r - t - 1);
    let b_parts = k_subsets(&b, t + 1);
    let mut edges = Vec::with_capacity(a_parts.len() * b_parts.len());
    for ap in &a_parts {
        for bp in &b_parts {
            edges.push(ap.union(bp));
        }
    }
    Hypergraph::new(n, r, edges)
}

/// Closed-form edge count of [`small_kernel`] on the same parameters.
pub fn small_kernel_count(n: u32, r: usize, t: usize, k: usize) -> Result<u128> {
    let s = small_kernel_params(n, r, t, k)?;
    Ok(binomial((n as usize - s) as u64, (r - t - 1) as u64) * binomial(s as u64, (t + 1) as u64))
}

fn validate_large(n: u32, r: usize, t: usize, k: usize) -> Result<()> {
    if t >= r {
        return Err(Error::invalid(format!("large kernel requires r > t, got r={r} t={t}")));
    }
    if 2 * t < r {
        return Err(Error::invalid(format!(
            "large kernel requires 2t >= r, got r={r} t={t}"
        )));
    }
    if k < 2 {
        return Err(Error::invalid(format!("large kernel requires k >= 2, got k={k}")));
    }
    if (k as u128) * (r as u128) * (r as u128) > n as u128 {
        return Err(Error::invalid(format!(
            "large kernel requires k * r^2 <= n, got k={k} r={r} n={n}"
        )));
    }
    Ok(())
}

/// Largest stage count for which the staged construction's union bound stays
/// below 1/2: floor(n^t / (2 C(r,t) s^t)) with s = (r-t)k + t - 1.
///
/// At t = 0 the bound is vacuous and the count is reported as unbounded (one
/// stage already suffices there, since n >= k r^2 > s).
pub fn stage_count(n: u32, r: usize, t: usize, k: usize) -> Result<StageCount> {
    if t >= r {
        return Err(Error::invalid(format!("stage count requires r > t, got r={r} t={t}")));
    }
    if k < 1 {
        return Err(Error::invalid("stage count requires k >= 1".to_string()));
    }
    if (k as u128) * (r as u128) * (r as u128) > n as u128 {
        return Err(Error::invalid(format!(
            "stage count requires k * r^2 <= n, got k={k} r={r} n={n}"
        )));
    }
    if t == 0 {
        return Ok(StageCount::Unbounded);
    }
    if 2 * t < r {
        return Err(Error::invalid(format!(
            "stage count requires 2t >= r, got r={r} t={t}"
        )));
    }
    let s = (r - t) * k + t - 1;
    let num = BigUint::from(n).pow(t as u32);
    let den = BigUint::from(2u32) * binomial_big(r as u64, t as u64) * BigUint::from(s).pow(t as u32);
    let count = num / den;
    let count = u64::try_from(&count)
        .map_err(|_| Error::invalid("stage count exceeds u64 at these parameters"))?;
    Ok(StageCount::Bounded(count))
}

/// Default schedule for [`large_kernel_with`]: s = (r-t)k + t - 1 vertices
/// per stage, [`stage_count`] stages, 1000 resamples per stage.
pub fn default_plan(n: u32, r: usize, t: usize, k: usize, seed: u64) -> Result<StagePlan> {
    validate_large(n, r, t, k)?;
    let s = (r - t) * k + t - 1;
    // t >= 1 is forced by 2t >= r > t, so the count is always bounded here,
    // and >= 1 because n >= k r^2 makes n^t dominate 2 C(r,t) s^t.
    let stages = stage_count(n, r, t, k)?
        .as_u64()
        .expect("bounded stage count for t >= 1");
    assert!(stages >= 1, "stage count must be >= 1 when k * r^2 <= n");
    Ok(StagePlan { s, stages, seed, retry_cap: 1000 })
}

/// Staged random S(r,t,k)-free hypergraph for the regime 2t >= r > t,
/// k >= 2, k r^2 <= n, using the default schedule from [`default_plan`].
pub fn large_kernel(n: u32, r: usize, t: usize, k: usize, seed: u64) -> Result<LargeKernelOutput> {
    let plan = default_plan(n, r, t, k, seed)?;
    large_kernel_with(n, r, t, k, &plan)
}

/// Staged random construction under an explicit schedule.
///
/// Each stage samples `plan.s` vertices uniformly with replacement from
/// {1..n}, then scans all C(s,r) position r-subsets of the sample and keeps
/// those whose vertices are pairwise distinct and meet every earlier stage
/// pool in at most t-1 vertices. The stage is accepted once the surviving
/// tuples induce at least ceil(C(s,r)/4) distinct edges, otherwise it is
/// resampled up to `plan.retry_cap` times.
///
/// Guarantees on success: edges from different stages intersect in at most
/// t-1 < t vertices (re-asserted before returning), every stage spans at
/// most s < (r-t)k + t vertices, and the edge count is at least
/// stages * ceil(C(s,r)/4). Together the first two make the output
/// S(r,t,k)-free: a kernel of size t fits inside one stage pool, and one
/// pool is too small to hold k disjoint petals around it.
pub fn large_kernel_with(
    n: u32,
    r: usize,
    t: usize,
    k: usize,
    plan: &StagePlan,
) -> Result<LargeKernelOutput> {
    validate_large(n, r, t, k)?;
    if plan.stages < 1 {
        return Err(Error::invalid("stage plan requires stages >= 1".to_string()));
    }
    if plan.retry_cap < 1 {
        return Err(Error::invalid("stage plan requires retry_cap >= 1".to_string()));
    }
    if plan.s < r {
        return Err(Error::invalid(format!(
            "stage plan requires s >= r, got s={} r={r}",
            plan.s
        )));
    }
    let s_max = (r - t) * k + t - 1;
    if plan.s > s_max {
        return Err(Error::invalid(format!(
            "stage plan requires s <= (r-t)k + t - 1 = {s_max}, got s={}",
            plan.s
        )));
    }
    if plan.s as u64 > n as u64 {
        return Err(Error::invalid(format!(
            "stage plan requires s <= n, got s={} n={n}",
            plan.s
        )));
    }
    let combos = binomial_big(plan.s as u64, r as u64);
    if combos > BigUint::from(1_000_000u32) {
        return Err(Error::invalid(format!(
            "stage scan requires C(s,r) <= 1000000, got C({},{r}) = {combos}",
            plan.s
        )));
    }
    let combos = u64::try_from(&combos).expect("checked against cap above");
    let threshold = combos.div_ceil(4) as usize;

    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let mut pools: Vec<VertexSet> = Vec::new();
    let mut per_stage_edges: Vec<Vec<VertexSet>> = Vec::new();
    let mut infos: Vec<StageInfo> = Vec::new();
    let mut all_edges: BTreeSet<VertexSet> = BTreeSet::new();

    for stage_idx in 1..=plan.stages as usize {
        let mut accepted = false;
        for attempt in 0..=plan.retry_cap {
            let sample: Vec<u32> = (0..plan.s).map(|_| rng.gen_range(1..=n)).collect();
            let mut qualifying = 0usize;
            let mut new_edges: BTreeSet<VertexSet> = BTreeSet::new();
            for combo in (0..plan.s).combinations(r) {
                let e = VertexSet::from_ids(combo.iter().map(|&i| sample[i]));
                if e.len() < r {
                    continue; // repeated vertex in the tuple
                }
                if pools.iter().any(|p| e.intersection_len(p) >= t) {
                    continue; // too deep into an earlier stage pool
                }
                qualifying += 1;
                new_edges.insert(e);
            }
            if new_edges.len() >= threshold {
                let pool = VertexSet::from_ids(sample.iter().copied());
                log::debug!(
                    "stage {stage_idx}: accepted after {attempt} resamples, {} distinct edges",
                    new_edges.len()
                );
                infos.push(StageInfo {
                    vertices: pool.vertices(),
                    qualifying_tuples: qualifying,
                    distinct_edges: new_edges.len(),
                    resamples: attempt,
                });
                pools.push(pool);
                per_stage_edges.push(new_edges.iter().cloned().collect());
                all_edges.extend(new_edges);
                accepted = true;
                break;
            }
        }
        if !accepted {
            return Err(Error::StageRetryExhausted {
                stage: stage_idx,
                attempts: plan.retry_cap,
            });
        }
    }

    // Re-assert the cross-stage guarantee: every edge of stage i meets every
    // earlier pool in <= t-1 vertices, which bounds edge-vs-edge overlaps
    // since stage j's edges sit inside pool j.
    for (i, edges) in per_stage_edges.iter().enumerate() {
        for e in edges {
            for pool in &pools[..i] {
                assert!(
                    e.intersection_len(pool) < t,
                    "edge {e} reaches {} vertices into an earlier stage pool",
                    e.intersection_len(pool)
                );
            }
        }
    }
    let hypergraph = Hypergraph::new(n, r, all_edges.into_iter().collect())?;
    assert!(
        hypergraph.edge_count() as u64 >= plan.stages * threshold as u64,
        "accepted stages must contribute at least the threshold each"
    );
    Ok(LargeKernelOutput { hypergraph, plan: *plan, threshold, stages: infos })
}

/// Complete r-graph on min(n, t + k(r-t) - 1) vertices, embedded in {1..n}.
/// Any S(r,t,k) needs t + k(r-t) distinct vertices, one more than available.
pub fn clique_bound(n: u32, r: usize, t: usize, k: usize) -> Result<Hypergraph> {
    if k < 2 {
        return Err(Error::invalid(format!("clique bound requires k >= 2, got k={k}")));
    }
    if t >= r {
        return Err(Error::invalid(format!("clique bound requires r > t, got r={r} t={t}")));
    }
    let cap = t + k * (r - t) - 1;
    let m = (n as usize).min(cap);
    if m < r {
        return Hypergraph::new(n, r, Vec::new());
    }
    let ids: Vec<u32> = (1..=m as u32).collect();
    Hypergraph::new(n, r, k_subsets(&ids, r))
}
