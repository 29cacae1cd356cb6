//! Edge types over a fixed cover choice, extending sequences, and the
//! dichotomy that ties them to set-system nonexistence.
//!
//! For a (2t+1)-uniform hypergraph with no S(2t+1,t,k), every t-set S of
//! vertices gets a fixed cover Phi(S) of its link. Reading an edge through
//! its ascending vertex ordering then assigns each t-subset I of the 2t+1
//! positions the least position outside I whose vertex lies in the cover of
//! the I-positioned vertices. The resulting table, the edge's type, is one
//! of (t+1)^C(2t+1,t) possible functions.
//!
//! Starting from any t-subset of positions, repeatedly adding f(I) for the
//! least I inside the current set that points outside it must terminate
//! within t+1 steps. Either some start reaches the full position set, and
//! the edges of that type can be enumerated coordinate by coordinate through
//! the covers, or no start does, and the proper subsets closed under f would
//! form a family satisfying all three set-system axioms on 2t+1 points,
//! which [`crate::setsystems`] shows cannot exist. [`dichotomy_check`]
//! verifies the first branch holds for every type.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeSeq;
use serde::Serialize;

use crate::combin::{k_subsets, lex_rank};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::setsystems::{is_system, SetSystem};
use crate::sunsearch::{greedy_matching_or_cover, MatchingOrCover, SunflowerWitness};
use crate::vertexset::VertexSet;

/// A function from the t-subsets of {1..2t+1} to {1..2t+1} with f(I) never
/// inside I, stored as one value per t-subset in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TypeFunction {
    t: usize,
    values: Vec<u32>,
}

impl TypeFunction {
    /// The t-subsets of {1..2t+1} in lexicographic order: the domain, in the
    /// same order as the stored values.
    pub fn domain(t: usize) -> Vec<VertexSet> {
        let ids: Vec<u32> = (1..=2 * t as u32 + 1).collect();
        k_subsets(&ids, t)
    }

    pub fn new(t: usize, values: Vec<u32>) -> Result<Self> {
        let domain = Self::domain(t);
        if values.len() != domain.len() {
            return Err(Error::invalid(format!(
                "type function needs {} values, got {}",
                domain.len(),
                values.len()
            )));
        }
        let n = 2 * t as u32 + 1;
        for (i_set, &v) in domain.iter().zip(&values) {
            if v < 1 || v > n || i_set.contains(v) {
                return Err(Error::invalid(format!(
                    "value {v} at {i_set} must lie in 1..={n} and outside the subset"
                )));
            }
        }
        Ok(TypeFunction { t, values })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn ground_size(&self) -> u32 {
        2 * self.t as u32 + 1
    }

    /// f(I) for a t-subset I of {1..2t+1}.
    pub fn get(&self, i_set: &VertexSet) -> u32 {
        debug_assert_eq!(i_set.len(), self.t);
        self.values[lex_rank(i_set, self.ground_size(), self.t)]
    }

    /// Builds the function whose slot digits (one per domain subset, each in
    /// 0..=t) select from the ascending complement of that subset.
    fn from_digits(t: usize, digits: &[u8]) -> Self {
        let values = Self::domain(t)
            .iter()
            .zip(digits)
            .map(|(i_set, &d)| {
                (1..=2 * t as u32 + 1)
                    .filter(|v| !i_set.contains(*v))
                    .nth(d as usize)
                    .expect("digit below t+1")
            })
            .collect();
        TypeFunction { t, values }
    }

    /// The index'th function in odometer order over slot digits. Total
    /// count is (t+1)^C(2t+1,t); valid for t <= 2 where that fits in u64.
    fn from_index(t: usize, mut index: u64) -> Self {
        let slots = Self::domain(t).len();
        let base = t as u64 + 1;
        let mut digits = vec![0u8; slots];
        for d in digits.iter_mut().rev() {
            *d = (index % base) as u8;
            index /= base;
        }
        Self::from_digits(t, &digits)
    }

    pub fn random(t: usize, rng: &mut impl Rng) -> Self {
        let slots = Self::domain(t).len();
        let digits: Vec<u8> = (0..slots).map(|_| rng.gen_range(0..=t as u8)).collect();
        Self::from_digits(t, &digits)
    }

    /// (I, f(I)) pairs with I in lexicographic order.
    pub fn to_pairs(&self) -> Vec<(Vec<u32>, u32)> {
        Self::domain(self.t)
            .iter()
            .zip(&self.values)
            .map(|(i_set, &v)| (i_set.vertices(), v))
            .collect()
    }
}

impl Serialize for TypeFunction {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs = self.to_pairs();
        let mut seq = ser.serialize_seq(Some(pairs.len()))?;
        for pair in &pairs {
            seq.serialize_element(pair)?;
        }
        seq.end()
    }
}

impl std::fmt::Display for TypeFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let pairs: Vec<String> = self
            .to_pairs()
            .iter()
            .map(|(i_set, v)| {
                let ids: Vec<String> = i_set.iter().map(|x| x.to_string()).collect();
                format!("{{{}}}->{v}", ids.join(","))
            })
            .collect();
        write!(f, "[{}]", pairs.join(" "))
    }
}

/// Fixed link covers for every t-set of vertices with a nonempty link.
/// Absent entries mean the link is empty and the cover is empty too.
#[derive(Debug, Clone)]
pub struct CoverMap {
    t: usize,
    k: usize,
    map: BTreeMap<VertexSet, VertexSet>,
}

impl CoverMap {
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The cover of the link of `s`; empty for t-sets with empty links.
    pub fn get(&self, s: &VertexSet) -> VertexSet {
        self.map.get(s).cloned().unwrap_or_default()
    }

    /// Stored (t-set, cover) entries in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (&VertexSet, &VertexSet)> {
        self.map.iter()
    }
}

/// Builds the cover map of a (2t+1)-uniform hypergraph with no S(2t+1,t,k):
/// for every t-set with a nonempty link, the greedy dichotomy must land on
/// the cover branch, and that cover has at most (k-1)(t+1) vertices.
///
/// A matching branch means the hypergraph was not free after all; the error
/// carries the assembled sunflower.
pub fn cover_map(h: &Hypergraph, t: usize, k: usize) -> Result<CoverMap> {
    if h.r() != 2 * t + 1 {
        return Err(Error::invalid(format!(
            "cover map requires a (2t+1)-uniform hypergraph, got r={} for t={t}",
            h.r()
        )));
    }
    if k < 2 {
        return Err(Error::invalid(format!("cover map requires k >= 2, got k={k}")));
    }
    let ids: Vec<u32> = (1..=h.n()).collect();
    let mut map = BTreeMap::new();
    for s in k_subsets(&ids, t) {
        let link = h.link_graph(&s)?;
        if link.edge_count() == 0 {
            continue;
        }
        match greedy_matching_or_cover(&link, k)? {
            MatchingOrCover::Matching(petals) => {
                return Err(Error::SunflowerFound(Box::new(SunflowerWitness {
                    kernel: s,
                    petals,
                    t,
                    k,
                })));
            }
            MatchingOrCover::Cover(c) => {
                assert!(
                    c.len() <= (k - 1) * (t + 1),
                    "greedy cover of a (t+1)-uniform link exceeds (k-1)(t+1)"
                );
                map.insert(s, c);
            }
        }
    }
    Ok(CoverMap { t, k, map })
}

/// The type of an edge: read `e` in ascending vertex order u_1 < .. <
/// u_{2t+1}; for each t-subset I of positions, f(I) is the least position j
/// outside I with u_j in the cover of {u_i : i in I}.
///
/// The cover of e_I hits e minus e_I (an edge of that link), so some j
/// always exists; running out is an assertion failure, not an error.
pub fn edge_type(e: &VertexSet, phi: &CoverMap) -> Result<TypeFunction> {
    let t = phi.t();
    let width = 2 * t + 1;
    if e.len() != width {
        return Err(Error::invalid(format!(
            "edge type requires an edge of {width} vertices, got {}",
            e.len()
        )));
    }
    let verts = e.vertices();
    let values = TypeFunction::domain(t)
        .iter()
        .map(|i_set| {
            let e_i = VertexSet::from_ids(i_set.iter().map(|p| verts[p as usize - 1]));
            let cover = phi.get(&e_i);
            (1..=width as u32)
                .find(|&j| !i_set.contains(j) && cover.contains(verts[j as usize - 1]))
                .expect("a link cover must meet the edge that witnessed the link")
        })
        .collect();
    TypeFunction::new(t, values)
}

/// One growth step: the least t-subset of the current set whose image falls
/// outside it, and the position that image added.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtendingStep {
    pub using: VertexSet,
    pub added: u32,
}

/// The full growth record from a start t-subset to its closure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtendingTrace {
    pub start: VertexSet,
    /// J_0 = start, then one entry per step.
    pub chain: Vec<VertexSet>,
    pub steps: Vec<ExtendingStep>,
    /// Final set: every t-subset maps back inside it.
    pub terminal: VertexSet,
}

impl ExtendingTrace {
    pub fn reaches_full(&self, t: usize) -> bool {
        self.terminal.len() == 2 * t + 1
    }
}

/// Grows `start` under f: while some t-subset I of the current set has f(I)
/// outside, add f(I) for the lexicographically least such I. Stops within
/// t+1 steps (the ground set has only 2t+1 positions).
pub fn extending_sequence(f: &TypeFunction, start: &VertexSet) -> Result<ExtendingTrace> {
    let t = f.t();
    let n = f.ground_size();
    if start.len() != t {
        return Err(Error::invalid(format!(
            "extending sequence requires a start of size t={t}, got {}",
            start.len()
        )));
    }
    if let Some(id) = start.max_id() {
        if id > n {
            return Err(Error::invalid(format!(
                "start {start} reaches outside the position set 1..={n}"
            )));
        }
    }
    let mut current = start.clone();
    let mut chain = vec![current.clone()];
    let mut steps = Vec::new();
    loop {
        let step = k_subsets_of_current(&current, t)
            .into_iter()
            .find_map(|i_set| {
                let v = f.get(&i_set);
                (!current.contains(v)).then_some(ExtendingStep { using: i_set, added: v })
            });
        match step {
            Some(step) => {
                current.insert(step.added);
                chain.push(current.clone());
                steps.push(step);
            }
            None => break,
        }
    }
    Ok(ExtendingTrace {
        start: start.clone(),
        terminal: current,
        chain,
        steps,
    })
}

fn k_subsets_of_current(set: &VertexSet, t: usize) -> Vec<VertexSet> {
    k_subsets(&set.vertices(), t)
}

/// Lexicographically least start whose growth reaches the full position
/// set, if any.
pub fn reaching_start(f: &TypeFunction) -> Option<VertexSet> {
    TypeFunction::domain(f.t())
        .into_iter()
        .find(|j| {
            extending_sequence(f, j)
                .expect("domain subsets are valid starts")
                .reaches_full(f.t())
        })
}

/// All proper subsets C of {1..2t+1} whose t-subsets all map back into C
/// under f. Sets smaller than t qualify vacuously. The result is always
/// intersection-closed and never contains a t-set, but may fail coverage;
/// it satisfies all three axioms exactly when no start reaches full.
pub fn extract_family(f: &TypeFunction) -> SetSystem {
    let t = f.t();
    let n = f.ground_size();
    let ids: Vec<u32> = (1..=n).collect();
    let mut members = Vec::new();
    for size in 0..n as usize {
        for cand in k_subsets(&ids, size) {
            let closed = k_subsets_of_current(&cand, t)
                .iter()
                .all(|i_set| cand.contains(f.get(i_set)));
            if closed {
                members.push(cand);
            }
        }
    }
    SetSystem::new(n, members).expect("members are subsets of the position set")
}

/// How [`dichotomy_check`] walks the space of type functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DichotomyMode {
    /// Every function; gated to t <= 2 (8 and 59049 functions).
    Exhaustive,
    /// `count` functions drawn slot-wise from a per-sample generator, so the
    /// result is independent of the thread count.
    Sampled { count: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DichotomyReport {
    pub t: usize,
    pub mode: String,
    pub total: u64,
    /// Functions where some start grows to the full position set.
    pub reaching: u64,
    /// Functions where no start does; each would extract a set family
    /// satisfying all three axioms on 2t+1 points, so this must stay 0.
    pub stuck: u64,
    pub seed: Option<u64>,
    /// At most 8 stuck functions, canonically ordered, for inspection.
    pub stuck_examples: Vec<TypeFunction>,
}

impl DichotomyReport {
    pub fn all_reaching(&self) -> bool {
        self.stuck == 0 && self.reaching == self.total
    }
}

fn mix_seed(seed: u64, i: u64) -> u64 {
    let mut z = seed ^ i.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Classifies type functions into reaching and stuck, in parallel over
/// `threads` workers. The classification of each function is pure, so the
/// report is identical for every thread count.
///
/// A stuck function's extracted family is re-checked on the spot: it must
/// satisfy all three axioms (anything else is a bug in the growth logic, and
/// panics), and its existence would contradict the nonexistence of such
/// families, so callers treat stuck > 0 as a falsified invariant.
pub fn dichotomy_check(t: usize, mode: DichotomyMode, threads: usize) -> Result<DichotomyReport> {
    if t < 1 {
        return Err(Error::invalid("dichotomy check requires t >= 1".to_string()));
    }
    if threads < 1 {
        return Err(Error::invalid("dichotomy check requires threads >= 1".to_string()));
    }
    let slots = TypeFunction::domain(t).len();
    let total = match mode {
        DichotomyMode::Exhaustive => {
            if t > 2 {
                return Err(Error::invalid(format!(
                    "exhaustive mode requires t <= 2, got t={t}; use sampling"
                )));
            }
            (t as u64 + 1).pow(slots as u32)
        }
        DichotomyMode::Sampled { count, .. } => {
            if t > 6 {
                return Err(Error::invalid(format!(
                    "sampled mode requires t <= 6, got t={t}"
                )));
            }
            if count < 1 {
                return Err(Error::invalid("sampled mode requires count >= 1".to_string()));
            }
            count
        }
    };

    let function_at = |i: u64| -> TypeFunction {
        match mode {
            DichotomyMode::Exhaustive => TypeFunction::from_index(t, i),
            DichotomyMode::Sampled { seed, .. } => {
                let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, i));
                TypeFunction::random(t, &mut rng)
            }
        }
    };

    let workers = (threads as u64).min(total).max(1);
    let chunk = total.div_ceil(workers);
    let mut reaching = 0u64;
    let mut stuck_all: Vec<TypeFunction> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for w in 0..workers {
            let lo = w * chunk;
            let hi = ((w + 1) * chunk).min(total);
            let function_at = &function_at;
            handles.push(scope.spawn(move || {
                let mut reached = 0u64;
                let mut stuck = Vec::new();
                for i in lo..hi {
                    let f = function_at(i);
                    if reaching_start(&f).is_some() {
                        reached += 1;
                    } else {
                        let family = extract_family(&f);
                        let verdict =
                            is_system(&family, t).expect("t fits the extracted ground set");
                        assert!(
                            verdict.is_none(),
                            "stuck type {f} extracted a family violating {verdict:?}: \
                             the growth logic is wrong"
                        );
                        stuck.push(f);
                    }
                }
                (reached, stuck)
            }));
        }
        for handle in handles {
            let (reached, stuck) = handle.join().expect("dichotomy worker panicked");
            reaching += reached;
            stuck_all.extend(stuck);
        }
    });
    stuck_all.sort();
    let stuck = stuck_all.len() as u64;
    stuck_all.truncate(8);
    Ok(DichotomyReport {
        t,
        mode: match mode {
            DichotomyMode::Exhaustive => "exhaustive".to_string(),
            DichotomyMode::Sampled { .. } => "sampled".to_string(),
        },
        total,
        reaching,
        stuck,
        seed: match mode {
            DichotomyMode::Exhaustive => None,
            DichotomyMode::Sampled { seed, .. } => Some(seed),
        },
        stuck_examples: stuck_all,
    })
}

/// The enumeration bound n^t * ((k-1)(t+1))^(t+1) on edges of one type.
pub fn count_type_tuples(n: u64, t: usize, k: usize) -> Result<BigUint> {
    if n < 2 || k < 2 {
        return Err(Error::invalid(format!(
            "tuple bound requires n >= 2 and k >= 2, got n={n} k={k}"
        )));
    }
    let per_step = (k as u64 - 1) * (t as u64 + 1);
    Ok(BigUint::from(n).pow(t as u32) * BigUint::from(per_step).pow(t as u32 + 1))
}

/// Edges of `h` grouped by type under the canonical cover map.
pub fn type_partition(
    h: &Hypergraph,
    t: usize,
    k: usize,
) -> Result<BTreeMap<TypeFunction, Vec<VertexSet>>> {
    let phi = cover_map(h, t, k)?;
    let mut groups: BTreeMap<TypeFunction, Vec<VertexSet>> = BTreeMap::new();
    for e in h.edges() {
        groups.entry(edge_type(e, &phi)?).or_default().push(e.clone());
    }
    Ok(groups)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TupleCheckReport {
    /// Lexicographically least start that grows to the full position set.
    pub reaching_start: VertexSet,
    /// Assignments enumerated through the covers (with multiplicity).
    pub tuple_count: u64,
    /// The closed-form bound n^t * ((k-1)(t+1))^(t+1), in decimal.
    pub bound_decimal: String,
    /// Edges of this type in `h`; each one was found among the assignments.
    pub edges_checked: usize,
}

/// Enumerates every candidate edge of type `f` by walking a reaching start's
/// growth steps through the cover map, and asserts that the edges of `h`
/// that actually have type `f` all appear among the candidates.
///
/// Positions in the start are assigned arbitrary vertices (n^t ordered
/// choices); each growth step fixes one more position to a vertex of the
/// cover of the already-assigned positions named by the step. Every type
/// has a reaching start (that is the dichotomy), so its absence panics.
pub fn type_tuple_check(
    h: &Hypergraph,
    t: usize,
    k: usize,
    f: &TypeFunction,
) -> Result<TupleCheckReport> {
    if h.r() != 2 * t + 1 {
        return Err(Error::invalid(format!(
            "tuple check requires a (2t+1)-uniform hypergraph, got r={}",
            h.r()
        )));
    }
    if f.t() != t {
        return Err(Error::invalid(format!(
            "type function is for t={}, expected t={t}",
            f.t()
        )));
    }
    let bound = count_type_tuples(h.n().max(2) as u64, t, k)?;
    if bound > BigUint::from(1_000_000u32) {
        return Err(Error::invalid(format!(
            "tuple enumeration requires the bound to stay under 10^6, got {bound}"
        )));
    }
    let phi = cover_map(h, t, k)?;
    let start = reaching_start(f)
        .expect("every type function has a reaching start; a stuck one would falsify the dichotomy");
    let trace = extending_sequence(f, &start)?;
    assert!(trace.reaches_full(t), "reaching start must grow to the full position set");

    // Partial assignments: position -> vertex, grown step by step.
    let width = 2 * t + 1;
    let start_positions = start.vertices();
    let mut assignments: Vec<Vec<Option<u32>>> = Vec::new();
    let mut base = vec![None; width];
    fill_tuples(&mut assignments, &mut base, &start_positions, h.n());
    for step in &trace.steps {
        let mut next = Vec::new();
        for asg in &assignments {
            let e_i = VertexSet::from_ids(
                step.using.iter().map(|p| asg[p as usize - 1].expect("assigned earlier")),
            );
            let cover = phi.get(&e_i);
            for v in cover.iter() {
                let mut grown = asg.clone();
                grown[step.added as usize - 1] = Some(v);
                next.push(grown);
            }
        }
        assignments = next;
    }

    let candidates: Vec<Vec<u32>> = assignments
        .iter()
        .map(|asg| asg.iter().map(|v| v.expect("all positions assigned")).collect())
        .collect();

    let mut edges_checked = 0;
    for e in h.edges() {
        if &edge_type(e, &phi)? != f {
            continue;
        }
        edges_checked += 1;
        let positional = e.vertices();
        assert!(
            candidates.iter().any(|c| c == &positional),
            "edge {e} of this type is missing from the enumerated tuples"
        );
    }
    Ok(TupleCheckReport {
        reaching_start: start,
        tuple_count: candidates.len() as u64,
        bound_decimal: bound.to_string(),
        edges_checked,
    })
}

/// Seeds `out` with every assignment of the start positions to vertices of
/// {1..n}, ordered tuples with repetition.
fn fill_tuples(
    out: &mut Vec<Vec<Option<u32>>>,
    base: &mut Vec<Option<u32>>,
    positions: &[u32],
    n: u32,
) {
    match positions.split_first() {
        None => out.push(base.clone()),
        Some((&p, rest)) => {
            for v in 1..=n {
                base[p as usize - 1] = Some(v);
                fill_tuples(out, base, rest, n);
            }
            base[p as usize - 1] = None;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(n: u32, edges: &[&[u32]]) -> Hypergraph {
        Hypergraph::new(
            n,
            edges[0].len(),
            edges.iter().map(|e| VertexSet::from_ids(e.iter().copied())).collect(),
        )
        .unwrap()
    }

    fn tf(t: usize, values: &[u32]) -> TypeFunction {
        TypeFunction::new(t, values.to_vec()).unwrap()
    }

    #[test]
    fn cover_map_of_the_two_edge_hypergraph() {
        let h = hg(4, &[&[1, 2, 3], &[1, 2, 4]]);
        let phi = cover_map(&h, 1, 2).unwrap();
        assert_eq!(phi.get(&VertexSet::singleton(1)), VertexSet::from_ids([2, 3]));
        assert_eq!(phi.get(&VertexSet::singleton(2)), VertexSet::from_ids([1, 3]));
        assert_eq!(phi.get(&VertexSet::singleton(3)), VertexSet::from_ids([1, 2]));
        assert_eq!(phi.get(&VertexSet::singleton(4)), VertexSet::from_ids([1, 2]));
        // Isolated vertices have empty links and empty covers.
        let h5 = hg(5, &[&[1, 2, 3], &[1, 2, 4]]);
        let phi5 = cover_map(&h5, 1, 2).unwrap();
        assert_eq!(phi5.get(&VertexSet::singleton(5)), VertexSet::new());
    }

    #[test]
    fn cover_map_surfaces_sunflowers_as_errors() {
        let h = hg(5, &[&[1, 2, 3], &[1, 4, 5]]);
        match cover_map(&h, 1, 2) {
            Err(Error::SunflowerFound(w)) => {
                assert_eq!(w.kernel, VertexSet::singleton(1));
                assert!(w.verify(&h).is_ok());
            }
            other => panic!("expected a sunflower, got {other:?}"),
        }
    }

    #[test]
    fn edge_types_of_the_two_edge_hypergraph() {
        let h = hg(4, &[&[1, 2, 3], &[1, 2, 4]]);
        let phi = cover_map(&h, 1, 2).unwrap();
        let expected = tf(1, &[2, 1, 1]);
        for e in h.edges() {
            assert_eq!(edge_type(e, &phi).unwrap(), expected);
        }
        let groups = type_partition(&h, 1, 2).unwrap();
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[&expected].len(), 2);
    }

    #[test]
    fn extending_sequences_follow_the_least_extending_subset() {
        let f = tf(1, &[2, 1, 1]); // f({1})=2, f({2})=1, f({3})=1
        let trace = extending_sequence(&f, &VertexSet::singleton(3)).unwrap();
        assert_eq!(trace.terminal, VertexSet::from_ids([1, 2, 3]));
        assert_eq!(trace.steps.len(), 2);
        assert_eq!(trace.steps[0].using, VertexSet::singleton(3));
        assert_eq!(trace.steps[0].added, 1);
        assert_eq!(trace.steps[1].using, VertexSet::singleton(1));
        assert_eq!(trace.steps[1].added, 2);
        assert!(trace.reaches_full(1));

        let trace = extending_sequence(&f, &VertexSet::singleton(1)).unwrap();
        assert_eq!(trace.terminal, VertexSet::from_ids([1, 2]));
        assert!(!trace.reaches_full(1));
        assert_eq!(trace.chain.len(), 2);

        assert_eq!(reaching_start(&f), Some(VertexSet::singleton(3)));
    }

    #[test]
    fn traces_stay_short_and_start_by_growing() {
        // The first step always fires: f(start) lies outside the start.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for t in 1..=2usize {
            for _ in 0..50 {
                let f = TypeFunction::random(t, &mut rng);
                for j in TypeFunction::domain(t) {
                    let trace = extending_sequence(&f, &j).unwrap();
                    assert!(trace.steps.len() <= t + 1);
                    assert!(trace.terminal.len() > t);
                    // Terminal is closed: no t-subset maps outside.
                    for i_set in k_subsets_of_current(&trace.terminal, t) {
                        assert!(trace.terminal.contains(f.get(&i_set)));
                    }
                }
            }
        }
    }

    #[test]
    fn extracted_families_match_hand_enumeration() {
        let f = tf(1, &[2, 1, 1]);
        let fam = extract_family(&f);
        assert_eq!(
            fam.family(),
            &[VertexSet::new(), VertexSet::from_ids([1, 2])]
        );
        assert!(is_system(&fam, 1).unwrap().is_some()); // {3} uncovered

        let cyclic = tf(1, &[2, 3, 1]);
        assert_eq!(extract_family(&cyclic).family(), &[VertexSet::new()]);
    }

    #[test]
    fn extracted_families_are_closed_and_avoid_t_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for t in 1..=2usize {
            for _ in 0..40 {
                let f = TypeFunction::random(t, &mut rng);
                let fam = extract_family(&f);
                for (i, a) in fam.family().iter().enumerate() {
                    assert_ne!(a.len(), t);
                    for b in &fam.family()[i + 1..] {
                        assert!(fam.contains(&a.intersection(b)));
                    }
                }
                // Proper terminals of the growth always land in the family.
                for j in TypeFunction::domain(t) {
                    let trace = extending_sequence(&f, &j).unwrap();
                    if !trace.reaches_full(t) {
                        assert!(fam.contains(&trace.terminal));
                    }
                }
            }
        }
    }

    #[test]
    fn dichotomy_is_clean_for_t_one() {
        let report = dichotomy_check(1, DichotomyMode::Exhaustive, 1).unwrap();
        assert_eq!(report.total, 8);
        assert_eq!(report.reaching, 8);
        assert_eq!(report.stuck, 0);
        assert!(report.all_reaching());
    }

    #[test]
    fn dichotomy_reports_are_thread_count_independent() {
        let one = dichotomy_check(1, DichotomyMode::Exhaustive, 1).unwrap();
        let four = dichotomy_check(1, DichotomyMode::Exhaustive, 4).unwrap();
        assert_eq!(one, four);

        let mode = DichotomyMode::Sampled { count: 300, seed: 12 };
        let a = dichotomy_check(2, mode, 1).unwrap();
        let b = dichotomy_check(2, mode, 3).unwrap();
        assert_eq!(a, b);
        assert!(a.all_reaching());
    }

    #[test]
    fn dichotomy_rejects_oversized_exhaustive_runs() {
        assert!(dichotomy_check(3, DichotomyMode::Exhaustive, 1).is_err());
        assert!(dichotomy_check(0, DichotomyMode::Exhaustive, 1).is_err());
    }

    #[test]
    fn tuple_bound_reference_values() {
        assert_eq!(count_type_tuples(10, 1, 2).unwrap(), BigUint::from(40u32));
        assert_eq!(count_type_tuples(10, 0, 2).unwrap(), BigUint::from(1u32));
        assert!(count_type_tuples(1, 1, 2).is_err());
    }

    #[test]
    fn tuple_enumeration_contains_every_edge_of_the_type() {
        let h = hg(4, &[&[1, 2, 3], &[1, 2, 4]]);
        let f = tf(1, &[2, 1, 1]);
        let report = type_tuple_check(&h, 1, 2, &f).unwrap();
        assert_eq!(report.reaching_start, VertexSet::singleton(3));
        assert_eq!(report.tuple_count, 16);
        assert_eq!(report.bound_decimal, "16");
        assert_eq!(report.edges_checked, 2);
    }

    #[test]
    fn type_functions_validate_and_serialize() {
        assert!(TypeFunction::new(1, vec![1, 1, 1]).is_err()); // f({1}) = 1
        assert!(TypeFunction::new(1, vec![2, 1]).is_err()); // wrong arity
        assert!(TypeFunction::new(1, vec![2, 1, 4]).is_err()); // out of range
        let f = tf(1, &[2, 1, 1]);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, "[[[1],2],[[2],1],[[3],1]]");
        assert_eq!(f.to_string(), "[{1}->2 {2}->1 {3}->1]");
    }

    #[test]
    fn exhaustive_enumeration_visits_distinct_functions() {
        let mut seen = std::collections::BTreeSet::new();
        for i in 0..8 {
            seen.insert(TypeFunction::from_index(1, i));
        }
        assert_eq!(seen.len(), 8);
    }
}
