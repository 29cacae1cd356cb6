//! Intersection-closed covering families and why small ones cannot exist.
//!
//! A family of subsets of {1..N} is checked against three axioms: it is
//! closed under pairwise intersection, every t-subset of {1..N} lies inside
//! some member, and no member's size is congruent to N mod t+1. This module
//! provides the axiom checker, a complete branch-and-prune search for such
//! families, two arithmetic routes to their nonexistence when t+1 is a prime
//! power (a binomial residue identity and an inclusion-exclusion tally), a
//! pigeonhole witness for collections of m+1 subsets of {1..m}, and a
//! constructive refutation that walks any closed covering family on 2t+1
//! points to a member of forbidden size.
//!
//! Ground sets stay small (N <= 20 for the search, family size <= 20 for the
//! inclusion-exclusion expansion); the guards are explicit errors, not
//! silent truncation.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combin::{binomial_big, k_subsets};
use crate::error::{Error, Result};
use crate::vertexset::VertexSet;

/// A finite family of subsets of {1..N}, kept sorted and duplicate-free.
///
/// Serializes as `{"N": 3, "family": [[1,2],[1,3]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SetSystemRaw")]
pub struct SetSystem {
    #[serde(rename = "N")]
    n: u32,
    family: Vec<VertexSet>,
}

#[derive(Deserialize)]
struct SetSystemRaw {
    #[serde(rename = "N")]
    n: u32,
    family: Vec<VertexSet>,
}

impl TryFrom<SetSystemRaw> for SetSystem {
    type Error = Error;
    fn try_from(raw: SetSystemRaw) -> Result<Self> {
        SetSystem::new(raw.n, raw.family)
    }
}

impl SetSystem {
    /// Builds a family over {1..n}, sorting members canonically and dropping
    /// duplicates. Members reaching outside {1..n} are rejected.
    pub fn new(n: u32, mut family: Vec<VertexSet>) -> Result<Self> {
        for m in &family {
            if let Some(id) = m.max_id() {
                if id > n {
                    return Err(Error::invalid(format!(
                        "family member {m} reaches outside the ground set 1..={n}"
                    )));
                }
            }
        }
        family.sort();
        family.dedup();
        Ok(SetSystem { n, family })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Members in canonical ascending order.
    pub fn family(&self) -> &[VertexSet] {
        &self.family
    }

    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }

    pub fn contains(&self, set: &VertexSet) -> bool {
        self.family.binary_search(set).is_ok()
    }

    /// Some member containing `set`, if any (the canonically least one).
    pub fn covering_member(&self, set: &VertexSet) -> Option<&VertexSet> {
        self.family.iter().find(|m| set.is_subset(m))
    }
}

/// First failed axiom, in check order: closure, then coverage, then sizes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemViolation {
    #[error("intersection {missing} of members {a} and {b} is not in the family")]
    ClosureMissing {
        a: VertexSet,
        b: VertexSet,
        missing: VertexSet,
    },
    #[error("{t_set} is not contained in any member")]
    Uncovered { t_set: VertexSet },
    #[error("member {member} has size {size} congruent to N = {n} (mod {modulus})")]
    ForbiddenSize {
        member: VertexSet,
        size: usize,
        n: u32,
        modulus: usize,
    },
}

/// Checks the three axioms in order and reports the first violation, or
/// `None` when `sys` is a genuine (t+1,t)-system on its ground set.
pub fn is_system(sys: &SetSystem, t: usize) -> Result<Option<SystemViolation>> {
    if t as u64 > sys.n as u64 {
        return Err(Error::invalid(format!(
            "axiom check requires t <= N, got t={t} N={}",
            sys.n
        )));
    }
    let fam = sys.family();
    for (i, a) in fam.iter().enumerate() {
        for b in &fam[i + 1..] {
            let x = a.intersection(b);
            if !sys.contains(&x) {
                return Ok(Some(SystemViolation::ClosureMissing {
                    a: a.clone(),
                    b: b.clone(),
                    missing: x,
                }));
            }
        }
    }
    let ids: Vec<u32> = (1..=sys.n).collect();
    for t_set in k_subsets(&ids, t) {
        if sys.covering_member(&t_set).is_none() {
            return Ok(Some(SystemViolation::Uncovered { t_set }));
        }
    }
    let modulus = t + 1;
    for m in fam {
        if m.len() % modulus == sys.n as usize % modulus {
            return Ok(Some(SystemViolation::ForbiddenSize {
                member: m.clone(),
                size: m.len(),
                n: sys.n,
                modulus,
            }));
        }
    }
    Ok(None)
}

/// Outcome of [`search_system`]. `nodes` counts branch decisions tried.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Sat(SetSystem),
    Unsat { nodes: u64 },
    BudgetExhausted { nodes: u64 },
}

struct SystemSearch {
    t: usize,
    full: u32,
    forbidden_residue: usize,
    modulus: usize,
    /// All t-subsets of {1..N} as bitmasks, in lexicographic order of their
    /// ascending id lists (not numeric mask order).
    t_sets: Vec<u32>,
    /// How many current members contain each t-set.
    cover_count: Vec<u32>,
    in_family: Vec<bool>,
    /// Current family; doubles as the undo trail.
    members: Vec<u32>,
    nodes: u64,
    budget: u64,
}

enum SearchStep {
    Sat,
    Unsat,
    Budget,
}

impl SystemSearch {
    fn insert(&mut self, m: u32) {
        self.in_family[m as usize] = true;
        self.members.push(m);
        for (i, ts) in self.t_sets.iter().enumerate() {
            if ts & m == *ts {
                self.cover_count[i] += 1;
            }
        }
    }

    /// Adds `u` and closes under pairwise intersection to a fixed point.
    /// Returns false (leaving partial additions on the trail for rollback)
    /// as soon as a forced member has a forbidden size.
    fn add_and_close(&mut self, u: u32) -> bool {
        let mut queue = vec![u];
        while let Some(m) = queue.pop() {
            if self.in_family[m as usize] {
                continue;
            }
            if m.count_ones() as usize % self.modulus == self.forbidden_residue {
                return false;
            }
            self.insert(m);
            for i in 0..self.members.len() - 1 {
                let x = self.members[i] & m;
                if !self.in_family[x as usize] {
                    queue.push(x);
                }
            }
        }
        true
    }

    fn rollback(&mut self, to: usize) {
        while self.members.len() > to {
            let m = self.members.pop().expect("trail underflow");
            self.in_family[m as usize] = false;
            for (i, ts) in self.t_sets.iter().enumerate() {
                if ts & m == *ts {
                    self.cover_count[i] -= 1;
                }
            }
        }
    }

    fn dfs(&mut self) -> SearchStep {
        let target = match (0..self.t_sets.len()).find(|&i| self.cover_count[i] == 0) {
            Some(i) => self.t_sets[i],
            None => return SearchStep::Sat,
        };
        // Any family satisfying all three axioms and extending the current
        // one must cover `target` with some allowed-size superset, and is
        // intersection-closed, so trying every allowed superset together
        // with closure propagation loses no solutions.
        let free = self.full & !target;
        let mut candidates = Vec::new();
        let mut x = free;
        loop {
            let u = target | x;
            if u.count_ones() as usize % self.modulus != self.forbidden_residue {
                candidates.push(u);
            }
            if x == 0 {
                break;
            }
            x = (x - 1) & free;
        }
        candidates.sort_by_key(|m| (m.count_ones(), *m));
        for u in candidates {
            if self.nodes >= self.budget {
                return SearchStep::Budget;
            }
            self.nodes += 1;
            let mark = self.members.len();
            if self.add_and_close(u) {
                match self.dfs() {
                    SearchStep::Unsat => {}
                    other => return other,
                }
            }
            self.rollback(mark);
        }
        SearchStep::Unsat
    }
}

/// Complete search for a family satisfying all three axioms on {1..N}.
///
/// Branches on the lexicographically least uncovered t-set, trying its
/// allowed-size supersets smallest first; every branch decision propagates
/// intersection closure to a fixed point and prunes the moment a forced
/// member has forbidden size. `Unsat` therefore means the whole space was
/// exhausted; `BudgetExhausted` is returned once `node_budget` branch
/// decisions have been spent.
pub fn search_system(t: usize, n: u32, node_budget: u64) -> Result<SearchOutcome> {
    if t < 1 {
        return Err(Error::invalid("system search requires t >= 1".to_string()));
    }
    if (n as u64) < t as u64 {
        return Err(Error::invalid(format!(
            "system search requires N >= t, got N={n} t={t}"
        )));
    }
    if n > 20 {
        return Err(Error::invalid(format!(
            "system search requires N <= 20, got N={n}"
        )));
    }
    let ids: Vec<u32> = (1..=n).collect();
    let t_sets: Vec<u32> = k_subsets(&ids, t).iter().map(mask_of).collect();
    let count = t_sets.len();
    let mut search = SystemSearch {
        t,
        full: (1u32 << n) - 1,
        forbidden_residue: n as usize % (t + 1),
        modulus: t + 1,
        t_sets,
        cover_count: vec![0; count],
        in_family: vec![false; 1usize << n],
        members: Vec::new(),
        nodes: 0,
        budget: node_budget,
    };
    let step = search.dfs();
    Ok(match step {
        SearchStep::Sat => {
            let family: Vec<VertexSet> = search.members.iter().map(|&m| set_of(m)).collect();
            let sys = SetSystem::new(n, family)?;
            let verdict = is_system(&sys, search.t)?;
            assert!(
                verdict.is_none(),
                "search returned a family that fails its own axioms: {verdict:?}"
            );
            SearchOutcome::Sat(sys)
        }
        SearchStep::Unsat => SearchOutcome::Unsat { nodes: search.nodes },
        SearchStep::Budget => SearchOutcome::BudgetExhausted { nodes: search.nodes },
    })
}

fn mask_of(set: &VertexSet) -> u32 {
    let mut m = 0u32;
    for id in set.iter() {
        m |= 1 << (id - 1);
    }
    m
}

fn set_of(mask: u32) -> VertexSet {
    VertexSet::from_ids((0..32).filter(|b| mask & (1 << b) != 0).map(|b| b + 1))
}

/// p^alpha factorization of m when m is a prime power (m >= 2).
pub fn prime_power(m: u64) -> Option<(u64, u32)> {
    if m < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut rest = m;
            let mut alpha = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                alpha += 1;
            }
            return if rest == 1 { Some((p, alpha)) } else { None };
        }
        p += 1;
    }
    Some((m, 1))
}

/// Two independently computed bits that must always be complementary:
/// C(a,t) is divisible by p exactly when a is not congruent to -1 mod t+1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LucasCheck {
    pub a: u64,
    pub t: usize,
    /// Prime base of t+1.
    pub p: u64,
    /// C(a,t) mod p == 0, by exact big-integer arithmetic.
    pub binomial_zero_mod_p: bool,
    /// a mod (t+1) == t, i.e. a is congruent to -1 mod t+1.
    pub residue_is_minus_one: bool,
}

impl LucasCheck {
    /// The equivalence the two bits must satisfy.
    pub fn consistent(&self) -> bool {
        self.binomial_zero_mod_p != self.residue_is_minus_one
    }
}

/// Computes both sides of the divisibility equivalence for C(a,t) mod p,
/// where t+1 = p^alpha is a prime power.
pub fn lucas_residue_check(a: u64, t: usize) -> Result<LucasCheck> {
    let (p, _alpha) = prime_power(t as u64 + 1).ok_or_else(|| {
        Error::invalid(format!(
            "residue check requires t+1 to be a prime power, got t+1={}",
            t + 1
        ))
    })?;
    let residue = binomial_big(a, t as u64) % p;
    Ok(LucasCheck {
        a,
        t,
        p,
        binomial_zero_mod_p: residue == BigUint::from(0u32),
        residue_is_minus_one: a % (t as u64 + 1) == t as u64,
    })
}

/// One row of the inclusion-exclusion tally: all subfamilies of a given size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncExcRow {
    /// Subfamily size i; the row's sign in the alternating sum is (-1)^(i+1).
    pub size: usize,
    pub term_count: u64,
    /// Sum of C(|intersection|, t) over the row's subfamilies, in decimal.
    pub sum_decimal: String,
    pub sum_mod_p: u64,
    /// How many of the row's terms are nonzero mod p.
    pub nonzero_terms_mod_p: u64,
}

/// Exact inclusion-exclusion tally of the t-subsets of {1..N} covered by a
/// closed covering family, with every term reduced mod p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncExcReport {
    pub n: u32,
    pub t: usize,
    pub p: u64,
    /// C(N,t), in decimal.
    pub left_decimal: String,
    pub left_mod_p: u64,
    pub rows: Vec<IncExcRow>,
    /// The alternating sum over all rows, in decimal.
    pub right_decimal: String,
    /// Exact equality of the two sides; forced by coverage, asserted.
    pub identity_holds: bool,
    /// Every individual term C(|intersection|, t) is 0 mod p.
    pub all_terms_zero_mod_p: bool,
    /// `all_terms_zero_mod_p` and `left_mod_p != 0` together: the impossible
    /// combination. Any family passing the preconditions makes the two sides
    /// equal, so this stays false on every real input; a family satisfying
    /// the size axiom as well would force it true, which is the
    /// contradiction showing no such family exists.
    pub contradiction_certified: bool,
}

/// Expands |union over members A of {t-sets inside A}| by inclusion-exclusion
/// over all nonempty subfamilies and compares with C(N,t).
///
/// Preconditions: t+1 is a prime power, the family is intersection-closed
/// and covers every t-subset of {1..N}, and has at most 20 members (the
/// expansion is exponential in the family size).
pub fn inclusion_exclusion_residue(sys: &SetSystem, t: usize) -> Result<IncExcReport> {
    let (p, _alpha) = prime_power(t as u64 + 1).ok_or_else(|| {
        Error::invalid(format!(
            "inclusion-exclusion residue requires t+1 to be a prime power, got t+1={}",
            t + 1
        ))
    })?;
    match is_system(sys, t)? {
        None | Some(SystemViolation::ForbiddenSize { .. }) => {}
        Some(v @ SystemViolation::ClosureMissing { .. }) => {
            return Err(Error::invalid(format!("family is not intersection-closed: {v}")));
        }
        Some(v @ SystemViolation::Uncovered { .. }) => {
            return Err(Error::invalid(format!("family does not cover every t-set: {v}")));
        }
    }
    if sys.len() > 20 {
        return Err(Error::invalid(format!(
            "inclusion-exclusion expansion requires at most 20 members, got {}",
            sys.len()
        )));
    }
    if sys.n > 31 {
        return Err(Error::invalid(format!(
            "inclusion-exclusion expansion requires N <= 31, got N={}",
            sys.n
        )));
    }

    // C(a,t) mod p for every possible intersection size a.
    let binom_mod: Vec<u64> = (0..=sys.n as u64)
        .map(|a| u64::try_from(&(binomial_big(a, t as u64) % p)).expect("residue below p"))
        .collect();
    let masks: Vec<u32> = sys.family().iter().map(mask_of).collect();
    let f = masks.len();
    let full = (1u32 << sys.n) - 1;

    let mut rows: Vec<IncExcRow> = (1..=f)
        .map(|size| IncExcRow {
            size,
            term_count: 0,
            sum_decimal: String::new(),
            sum_mod_p: 0,
            nonzero_terms_mod_p: 0,
        })
        .collect();
    let mut row_sums: Vec<BigUint> = vec![BigUint::from(0u32); f + 1];
    // inter[m] for subfamily mask m, built from inter[m without lowest bit].
    let mut inter: Vec<u32> = vec![full; 1usize << f];
    let mut all_zero = true;
    for m in 1u64..(1u64 << f) {
        let low = m.trailing_zeros() as usize;
        let rest = (m & (m - 1)) as usize;
        let x = inter[rest] & masks[low];
        inter[m as usize] = x;
        let size = m.count_ones() as usize;
        let a = x.count_ones() as u64;
        let row = &mut rows[size - 1];
        row.term_count += 1;
        row_sums[size] += binomial_big(a, t as u64);
        let residue = binom_mod[a as usize];
        row.sum_mod_p = (row.sum_mod_p + residue) % p;
        if residue != 0 {
            row.nonzero_terms_mod_p += 1;
            all_zero = false;
        }
    }

    let mut right = BigInt::from(0);
    for (size, sum) in row_sums.iter().enumerate().skip(1) {
        let signed = BigInt::from(sum.clone());
        if size % 2 == 1 {
            right += signed;
        } else {
            right -= signed;
        }
    }
    for (row, sum) in rows.iter_mut().zip(row_sums.iter().skip(1)) {
        row.sum_decimal = sum.to_string();
    }

    let left = binomial_big(sys.n as u64, t as u64);
    let left_mod_p = u64::try_from(&(&left % p)).expect("residue below p");
    let identity_holds = BigInt::from(left.clone()) == right;
    assert!(
        identity_holds,
        "coverage holds, so the inclusion-exclusion tally must equal C(N,t)"
    );
    Ok(IncExcReport {
        n: sys.n,
        t,
        p,
        left_decimal: left.to_string(),
        left_mod_p,
        rows,
        right_decimal: right.to_string(),
        identity_holds,
        all_terms_zero_mod_p: all_zero,
        contradiction_certified: all_zero && left_mod_p != 0,
    })
}

/// s positions (0-based, ascending) into a collection of m+1 subsets of
/// {1..m} whose sets intersect in exactly s-1 elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FranklKatonaWitness {
    pub s: usize,
    pub indices: Vec<usize>,
}

impl FranklKatonaWitness {
    /// Recomputes the defining property against the original collection.
    pub fn verify(&self, sets: &[VertexSet]) -> bool {
        if self.indices.len() != self.s || self.s == 0 {
            return false;
        }
        let mut seen = BTreeSet::new();
        for &i in &self.indices {
            if i >= sets.len() || !seen.insert(i) {
                return false;
            }
        }
        intersection_of(sets, &self.indices).len() == self.s - 1
    }
}

fn intersection_of(sets: &[VertexSet], indices: &[usize]) -> VertexSet {
    let mut it = indices.iter();
    let first = *it.next().expect("nonempty index list");
    let mut acc = sets[first].clone();
    for &i in it {
        acc = acc.intersection(&sets[i]);
    }
    acc
}

/// Finds s of the given m+1 subsets of {1..m} whose intersection has size
/// exactly s-1. Duplicates are allowed; indices refer to positions. The
/// smallest s wins, with the lexicographically least index set at that s.
///
/// Such a witness always exists for collections of this shape, so exhausting
/// the search is an internal error, not an Err.
pub fn frankl_katona(sets: &[VertexSet]) -> Result<FranklKatonaWitness> {
    if sets.is_empty() {
        return Err(Error::invalid(
            "pigeonhole witness requires at least one set (m+1 sets over {1..m})".to_string(),
        ));
    }
    let m = sets.len() - 1;
    for set in sets {
        if let Some(id) = set.max_id() {
            if id as usize > m {
                return Err(Error::invalid(format!(
                    "set {set} reaches outside the ground set 1..={m}"
                )));
            }
        }
    }
    for s in 1..=sets.len() {
        for indices in (0..sets.len()).combinations(s) {
            if intersection_of(sets, &indices).len() == s - 1 {
                return Ok(FranklKatonaWitness { s, indices });
            }
        }
    }
    unreachable!("every collection of m+1 subsets of {{1..m}} has such an intersection")
}

/// Constructive refutation of a closed covering family on {1..2t+1}: the
/// walk that ends at a member whose size is congruent to N mod t+1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefutationTrace {
    /// The whole ground set is a member; its own size is congruent to N.
    GroundSetMember { n: u32, t: usize, culprit: VertexSet },
    /// The main walk through a minimal uncovered set.
    MinimalUncovered {
        n: u32,
        t: usize,
        /// Minimal uncovered S (smallest size, then lexicographically least).
        uncovered: VertexSet,
        /// First t+1 elements of S, ascending.
        pivots: Vec<u32>,
        /// For each pivot i, the least member meeting S in exactly S less i.
        selectors: Vec<VertexSet>,
        /// The t elements outside the pivot block, ascending; ground set for
        /// the pigeonhole step after relabeling to {1..t}.
        outside: Vec<u32>,
        /// Selector parts outside the pivot block, relabeled to {1..t}.
        d_sets: Vec<VertexSet>,
        witness: FranklKatonaWitness,
        /// Intersection of the selected selectors: a member of size exactly
        /// t, which is congruent to N = 2t+1 mod t+1.
        culprit: VertexSet,
    },
}

impl RefutationTrace {
    pub fn culprit(&self) -> &VertexSet {
        match self {
            RefutationTrace::GroundSetMember { culprit, .. } => culprit,
            RefutationTrace::MinimalUncovered { culprit, .. } => culprit,
        }
    }

    /// The trace as an ordered list of step objects.
    pub fn to_json(&self) -> serde_json::Value {
        let ids = |set: &VertexSet| serde_json::json!(set.vertices());
        match self {
            RefutationTrace::GroundSetMember { n, t, culprit } => serde_json::json!([
                {"step": "axioms", "closure": "ok", "coverage": "ok"},
                {"step": "culprit", "member": ids(culprit), "size": culprit.len(),
                 "reason": format!("size {} == N == {} (mod {})", culprit.len(), n, t + 1)},
            ]),
            RefutationTrace::MinimalUncovered {
                n,
                t,
                uncovered,
                pivots,
                selectors,
                outside,
                d_sets,
                witness,
                culprit,
            } => {
                let mut steps = vec![
                    serde_json::json!({"step": "axioms", "closure": "ok", "coverage": "ok"}),
                    serde_json::json!({"step": "minimal_uncovered", "set": ids(uncovered)}),
                ];
                for (i, a) in pivots.iter().zip(selectors.iter()) {
                    steps.push(serde_json::json!({
                        "step": "selector", "pivot": i, "member": ids(a),
                    }));
                }
                steps.push(serde_json::json!({
                    "step": "relabel", "outside": outside,
                    "d_sets": d_sets.iter().map(|d| d.vertices()).collect::<Vec<_>>(),
                }));
                steps.push(serde_json::json!({
                    "step": "pigeonhole", "s": witness.s, "indices": witness.indices,
                }));
                steps.push(serde_json::json!({
                    "step": "culprit", "member": ids(culprit), "size": culprit.len(),
                    "reason": format!("size {} == {} == N == {} (mod {})",
                                      culprit.len(), t, n, t + 1),
                }));
                serde_json::Value::Array(steps)
            }
        }
    }
}

/// Walks a closed covering family on {1..2t+1} to a member of forbidden
/// size, replaying the nonexistence argument step by step.
///
/// If the ground set itself is a member, it is already the culprit. Otherwise
/// a minimal uncovered set S exists and has size >= t+1; its first t+1
/// elements each admit a member meeting S everywhere but there, those
/// members agree pairwise on the pivot block, and the pigeonhole witness on
/// their parts outside the block picks s of them whose total intersection
/// has size (t+1-s) + (s-1) = t, which is congruent to 2t+1 mod t+1.
pub fn refute_system_2t1(sys: &SetSystem, t: usize) -> Result<RefutationTrace> {
    let n = 2 * t as u32 + 1;
    if sys.n != n {
        return Err(Error::invalid(format!(
            "refutation requires a ground set of size 2t+1 = {n}, got N={}",
            sys.n
        )));
    }
    if t < 1 {
        return Err(Error::invalid("refutation requires t >= 1".to_string()));
    }
    match is_system(sys, t)? {
        None | Some(SystemViolation::ForbiddenSize { .. }) => {}
        Some(v) => {
            return Err(Error::invalid(format!(
                "refutation requires closure and coverage to hold: {v}"
            )));
        }
    }

    let ground = VertexSet::from_ids(1..=n);
    if sys.contains(&ground) {
        return Ok(RefutationTrace::GroundSetMember { n, t, culprit: ground });
    }

    // Minimal uncovered set: smallest size first, lexicographic within a
    // size. Proper subsets are then all covered. Sizes up to t are covered
    // via coverage of any containing t-set, and the ground set itself is
    // uncovered here, so the scan stops at some t+1 <= |S| <= N.
    let ids: Vec<u32> = (1..=n).collect();
    let mut uncovered = None;
    'scan: for size in t + 1..=n as usize {
        for cand in k_subsets(&ids, size) {
            if sys.covering_member(&cand).is_none() {
                uncovered = Some(cand);
                break 'scan;
            }
        }
    }
    let s_set = uncovered.expect("the ground set is uncovered, so the scan cannot fail");

    let pivots: Vec<u32> = s_set.iter().take(t + 1).collect();
    let pivot_block = VertexSet::from_ids(pivots.iter().copied());
    let mut selectors = Vec::with_capacity(t + 1);
    for &i in &pivots {
        let mut goal = s_set.clone();
        goal.remove(i);
        // Any member containing S minus i cannot contain all of S (S is
        // uncovered), so it meets S in exactly S minus i.
        let a = sys
            .covering_member(&goal)
            .expect("proper subsets of a minimal uncovered set are covered")
            .clone();
        assert_eq!(a.intersection(&s_set), goal, "selector must miss only the pivot");
        selectors.push(a);
    }

    // Relabel the t elements outside the pivot block to {1..t} and cut the
    // selectors down to that ground set.
    let outside: Vec<u32> = (1..=n).filter(|v| !pivot_block.contains(*v)).collect();
    assert_eq!(outside.len(), t, "2t+1 points minus a t+1 block leaves t");
    let relabel = |set: &VertexSet| -> VertexSet {
        VertexSet::from_ids(
            outside
                .iter()
                .enumerate()
                .filter(|(_, v)| set.contains(**v))
                .map(|(idx, _)| idx as u32 + 1),
        )
    };
    let d_sets: Vec<VertexSet> = selectors.iter().map(|a| relabel(&a.difference(&pivot_block))).collect();
    let witness = frankl_katona(&d_sets)?;

    let chosen: Vec<usize> = witness.indices.clone();
    let culprit = intersection_of(&selectors, &chosen);
    assert_eq!(
        culprit.len(),
        t,
        "selected selectors must intersect in (t+1-s) + (s-1) = t points"
    );
    assert!(
        sys.contains(&culprit),
        "closure keeps finite intersections of members in the family"
    );
    Ok(RefutationTrace::MinimalUncovered {
        n,
        t,
        uncovered: s_set,
        pivots,
        selectors,
        outside,
        d_sets,
        witness,
        culprit,
    })
}

/// Random intersection-closed family covering every t-subset of {1..n}:
/// each uncovered t-set (in lexicographic order) gets a random superset,
/// then the family is closed under pairwise intersection to a fixed point.
/// No attempt is made to respect the size axiom; the output is raw material
/// for the axiom checker and the refutation walk.
pub fn random_closed_covering_family(n: u32, t: usize, seed: u64) -> Result<SetSystem> {
    if t as u64 > n as u64 {
        return Err(Error::invalid(format!(
            "covering family requires t <= n, got t={t} n={n}"
        )));
    }
    if n > 20 {
        return Err(Error::invalid(format!("covering family requires n <= 20, got n={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids: Vec<u32> = (1..=n).collect();
    let mut family: BTreeSet<u32> = BTreeSet::new();
    for t_set in k_subsets(&ids, t) {
        let mask = mask_of(&t_set);
        if family.iter().any(|m| m & mask == mask) {
            continue;
        }
        let mut add = mask;
        for v in 0..n {
            if mask & (1 << v) == 0 && rng.gen_bool(0.5) {
                add |= 1 << v;
            }
        }
        family.insert(add);
    }
    // Close under pairwise intersection.
    loop {
        let snapshot: Vec<u32> = family.iter().copied().collect();
        let before = family.len();
        for (i, a) in snapshot.iter().enumerate() {
            for b in &snapshot[i + 1..] {
                family.insert(a & b);
            }
        }
        if family.len() == before {
            break;
        }
    }
    SetSystem::new(n, family.into_iter().map(set_of).collect())
}
