//! Exact and heuristic edge maxima for hypergraphs avoiding S(r,t,k), and
//! the polynomial envelopes that bracket them.
//!
//! The exact search is a branch and bound over the C(n,r) candidate edges in
//! colexicographic order. Freeness is maintained incrementally: a sunflower
//! created by a newly added edge must have its kernel inside that edge, so
//! only the links of the new edge's t-subsets need a fresh matching check.
//! Symmetry is broken once at the root: a nonempty extremal example can be
//! relabeled so that its colex-least candidate {1..r} is an edge, so the
//! branch that excludes the first candidate is dropped and the empty
//! hypergraph is covered by the initial incumbent.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combin::{binomial, k_subsets, k_subsets_of};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::sunsearch::{find_sunflower, max_matching_indices};
use crate::vertexset::VertexSet;

/// Knobs for [`exact_turan`]. The candidate ceiling keeps the search at desk
/// scale; the node budget turns an over-long run into a lower-bound answer
/// instead of an open-ended one.
#[derive(Debug, Clone, Copy)]
pub struct ExactConfig {
    /// Maximum number of candidate edges C(n,r) the search will accept.
    pub max_candidates: u64,
    /// Search nodes allowed before giving up; `None` means unbounded.
    pub node_budget: Option<u64>,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            max_candidates: 32,
            node_budget: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TuranStatus {
    /// The reported maximum is proved: no free hypergraph has more edges.
    Exact,
    /// Only the witness's edge count is claimed.
    LowerBoundOnly,
    /// The node budget ran out; the witness is the best found so far.
    BudgetExhausted,
}

impl std::fmt::Display for TuranStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TuranStatus::Exact => "exact",
            TuranStatus::LowerBoundOnly => "lower-bound-only",
            TuranStatus::BudgetExhausted => "budget-exhausted",
        })
    }
}

/// Outcome of a Turán computation: the witness is always S(r,t,k)-free, and
/// `exact_max` is populated exactly when the status proves maximality.
#[derive(Debug, Clone)]
pub struct TuranResult {
    pub n: u32,
    pub r: usize,
    pub t: usize,
    pub k: usize,
    pub exact_max: Option<u64>,
    pub lower_witness: Hypergraph,
    pub status: TuranStatus,
}

impl TuranResult {
    /// Wraps a free hypergraph as an unproved lower bound.
    pub fn lower_only(n: u32, r: usize, t: usize, k: usize, witness: Hypergraph) -> Self {
        TuranResult {
            n,
            r,
            t,
            k,
            exact_max: None,
            lower_witness: witness,
            status: TuranStatus::LowerBoundOnly,
        }
    }

    pub fn lower_bound(&self) -> u64 {
        self.lower_witness.edge_count() as u64
    }
}

fn validate_turan_params(r: usize, t: usize, k: usize) -> Result<()> {
    if r < 1 {
        return Err(Error::invalid("uniformity r must be at least 1"));
    }
    if t >= r {
        return Err(Error::invalid(format!(
            "kernel size must stay below the uniformity: t={t}, r={r}"
        )));
    }
    if k < 2 {
        return Err(Error::invalid(format!("petal count must be at least 2, got k={k}")));
    }
    Ok(())
}

/// All r-subsets of {1..n} in colexicographic order, so {1..r} comes first
/// and candidates on a fresh largest vertex come after everything below it.
fn colex_candidates(n: u32, r: usize) -> Vec<VertexSet> {
    let ids: Vec<u32> = (1..=n).collect();
    let mut cands = k_subsets(&ids, r);
    cands.sort_by(|a, b| {
        let (a, b) = (a.vertices(), b.vertices());
        a.iter().rev().cmp(b.iter().rev())
    });
    cands
}

/// Whether adding `new` to the free edge set `chosen` creates an S(r,t,k).
/// Any new sunflower must use `new`, so its kernel is one of the t-subsets
/// of `new`; for each, a k-matching is sought in that kernel's link.
fn creates_sunflower(chosen: &[VertexSet], new: &VertexSet, t: usize, k: usize) -> bool {
    let petal_size = new.len() - t;
    for kernel in k_subsets_of(new, t) {
        let link: Vec<VertexSet> = chosen
            .iter()
            .filter(|e| kernel.is_subset(e))
            .chain(std::iter::once(new))
            .map(|e| e.difference(&kernel))
            .collect();
        if link.len() >= k && max_matching_indices(&link, petal_size, k).len() >= k {
            return true;
        }
    }
    false
}

struct ExactSearch {
    candidates: Vec<VertexSet>,
    t: usize,
    k: usize,
    chosen: Vec<VertexSet>,
    best: Vec<VertexSet>,
    nodes: u64,
    budget: Option<u64>,
    truncated: bool,
}

impl ExactSearch {
    fn run(&mut self, idx: usize) {
        self.nodes += 1;
        if let Some(b) = self.budget {
            if self.nodes > b {
                self.truncated = true;
                return;
            }
        }
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        if idx == self.candidates.len()
            || self.chosen.len() + (self.candidates.len() - idx) <= self.best.len()
        {
            return;
        }
        let cand = self.candidates[idx].clone();
        if !creates_sunflower(&self.chosen, &cand, self.t, self.k) {
            self.chosen.push(cand);
            self.run(idx + 1);
            self.chosen.pop();
            if self.truncated {
                return;
            }
        }
        // Root exclusion is redundant: relabeling moves any edge of a
        // nonempty example onto {1..r}, and the incumbent covers "empty".
        if idx > 0 {
            self.run(idx + 1);
        }
    }
}

/// Maximum number of edges of an S(r,t,k)-free r-graph on n vertices, by
/// branch and bound, with a free extremal witness. Requires C(n,r) to stay
/// within the configured ceiling. A budget hit downgrades the status to
/// budget-exhausted and leaves `exact_max` empty.
pub fn exact_turan(n: u32, r: usize, t: usize, k: usize, config: &ExactConfig) -> Result<TuranResult> {
    validate_turan_params(r, t, k)?;
    let count = binomial(n as u64, r as u64);
    if count > config.max_candidates as u128 {
        return Err(Error::invalid(format!(
            "C({n},{r}) = {count} candidate edges exceeds the exactness ceiling {}; \
             raise max_candidates or use the greedy lower bound",
            config.max_candidates
        )));
    }
    // The greedy incumbent only tightens pruning; correctness of the final
    // maximum comes from the search exhausting the normalized space.
    let incumbent = greedy_lower(n, r, t, k, 0)?;
    let mut search = ExactSearch {
        candidates: colex_candidates(n, r),
        t,
        k,
        chosen: Vec::new(),
        best: incumbent.edges().to_vec(),
        nodes: 0,
        budget: config.node_budget,
        truncated: false,
    };
    search.run(0);
    let witness = Hypergraph::new(n, r, search.best.clone())?;
    assert!(
        find_sunflower(&witness, t, k)?.is_none(),
        "extremal witness must be free; the incremental pruning is wrong"
    );
    Ok(if search.truncated {
        TuranResult {
            n,
            r,
            t,
            k,
            exact_max: None,
            lower_witness: witness,
            status: TuranStatus::BudgetExhausted,
        }
    } else {
        TuranResult {
            n,
            r,
            t,
            k,
            exact_max: Some(search.best.len() as u64),
            lower_witness: witness,
            status: TuranStatus::Exact,
        }
    })
}

/// Free hypergraph built by scanning the candidate edges in a seeded random
/// order and keeping each edge that does not complete a sunflower.
///
/// Degenerate sizes short-circuit: with n < r there are no edges at all,
/// and with n < t + k(r-t) no sunflower fits inside {1..n}, so the complete
/// hypergraph is already free.
pub fn greedy_lower(n: u32, r: usize, t: usize, k: usize, seed: u64) -> Result<Hypergraph> {
    validate_turan_params(r, t, k)?;
    if (n as usize) < r {
        return Ok(Hypergraph::empty(n, r));
    }
    let count = binomial(n as u64, r as u64);
    if count > 1_000_000 {
        return Err(Error::invalid(format!(
            "C({n},{r}) = {count} candidate edges is beyond the greedy scan limit"
        )));
    }
    if (n as usize) < t + k * (r - t) {
        return Hypergraph::complete(n, r);
    }
    let ids: Vec<u32> = (1..=n).collect();
    let mut candidates = k_subsets(&ids, r);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    candidates.shuffle(&mut rng);
    let mut kept: Vec<VertexSet> = Vec::new();
    // Petals of kept edges grouped by kernel, so each candidate is checked
    // only against the edges it shares a t-subset with. Same predicate as
    // creates_sunflower, scaled to large candidate streams.
    let mut links: BTreeMap<VertexSet, Vec<VertexSet>> = BTreeMap::new();
    for cand in candidates {
        let blocked = k_subsets_of(&cand, t).into_iter().any(|kernel| {
            links.get(&kernel).is_some_and(|link| {
                link.len() + 1 >= k && {
                    let mut petals = link.clone();
                    petals.push(cand.difference(&kernel));
                    max_matching_indices(&petals, r - t, k).len() >= k
                }
            })
        });
        if !blocked {
            for kernel in k_subsets_of(&cand, t) {
                let petal = cand.difference(&kernel);
                links.entry(kernel).or_default().push(petal);
            }
            kept.push(cand);
        }
    }
    Hypergraph::new(n, r, kept)
}

/// Which of the two envelope formulas governs a parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// 2t+1 <= r: the kernel is small relative to the edges.
    Small,
    /// 2t+1 > r: the kernel dominates.
    Large,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Small => "small",
            Regime::Large => "large",
        })
    }
}

/// Both envelope evaluations at one parameter point, with the applicable
/// one singled out. At 2t+1 = r the two formulas agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    pub n: u64,
    pub r: usize,
    pub t: usize,
    pub k: usize,
    /// n^(r-t-1) * k^(t+1)
    pub small: BigUint,
    /// n^t * k^(r-t)
    pub large: BigUint,
    pub regime: Regime,
}

impl Envelope {
    /// The evaluation of the formula that applies in this regime.
    pub fn value(&self) -> &BigUint {
        match self.regime {
            Regime::Small => &self.small,
            Regime::Large => &self.large,
        }
    }
}

/// Evaluates the growth-order envelope n^(r-t-1) k^(t+1) (small kernels,
/// 2t+1 <= r) and n^t k^(r-t) (large kernels), picking the applicable one.
pub fn bound_envelope(n: u64, r: usize, t: usize, k: usize) -> Result<Envelope> {
    validate_turan_params(r, t, k)?;
    if n < 1 {
        return Err(Error::invalid("envelope requires n >= 1"));
    }
    let small = BigUint::from(n).pow((r - t - 1) as u32) * BigUint::from(k as u64).pow(t as u32 + 1);
    let large = BigUint::from(n).pow(t as u32) * BigUint::from(k as u64).pow((r - t) as u32);
    let regime = if 2 * t < r { Regime::Small } else { Regime::Large };
    Ok(Envelope {
        n,
        r,
        t,
        k,
        small,
        large,
        regime,
    })
}
