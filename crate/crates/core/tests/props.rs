//! Randomized invariants. Each property restates a guarantee the library
//! makes and checks it against an independent model where one exists
//! (BTreeSet for set algebra, tuple scans for detection, digit counters for
//! residues), rather than trusting the structure under test.

use std::collections::BTreeSet;

use itertools::Itertools;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sunflower_core::combin::{binomial, k_subsets};
use sunflower_core::constructions::{clique_bound, small_kernel};
use sunflower_core::reduction::{extending_sequence, extract_family, reaching_start, TypeFunction};
use sunflower_core::setsystems::{
    frankl_katona, is_system, lucas_residue_check, random_closed_covering_family, SystemViolation,
};
use sunflower_core::sunsearch::{
    find_sunflower, find_sunflower_parallel, greedy_matching_or_cover,
};
use sunflower_core::turan::{exact_turan, greedy_lower, ExactConfig, TuranStatus};
use sunflower_core::{Hypergraph, VertexSet};

/// Uniform hypergraph on up to `max_n` vertices with each possible edge
/// included independently.
fn small_hypergraph(max_n: u32, max_r: usize) -> impl Strategy<Value = Hypergraph> {
    (1..=max_n, 1..=max_r).prop_flat_map(|(n, r)| {
        let all = k_subsets(&(1..=n).collect::<Vec<_>>(), r);
        let m = all.len();
        prop::collection::vec(any::<bool>(), m..=m).prop_map(move |mask| {
            let edges: Vec<VertexSet> = all
                .iter()
                .zip(&mask)
                .filter(|&(_, &keep)| keep)
                .map(|(e, _)| e.clone())
                .collect();
            Hypergraph::new(n, r, edges).unwrap()
        })
    })
}

/// Type function drawn by picking, for each t-subset of the positions, one
/// of the t+1 positions outside it.
fn type_function() -> impl Strategy<Value = TypeFunction> {
    (1usize..=2)
        .prop_flat_map(|t| {
            let dom = TypeFunction::domain(t);
            let len = dom.len();
            (Just(t), prop::collection::vec(0usize..=t, len..=len))
        })
        .prop_map(|(t, digits)| {
            let ground = 2 * t as u32 + 1;
            let values = TypeFunction::domain(t)
                .iter()
                .zip(digits)
                .map(|(i_set, d)| (1..=ground).filter(|&v| !i_set.contains(v)).nth(d).unwrap())
                .collect();
            TypeFunction::new(t, values).unwrap()
        })
}

/// Tuple scan with no shared state with the detector: true iff some k edges
/// pairwise intersect in one common t-set.
fn tuples_contain_sunflower(h: &Hypergraph, t: usize, k: usize) -> bool {
    h.edges().iter().combinations(k).any(|tuple| {
        let core = tuple[0].intersection(tuple[1]);
        core.len() == t
            && tuple.iter().tuple_combinations().all(|(a, b)| a.intersection(b) == core)
    })
}

proptest! {
    #[test]
    fn set_ops_match_btreeset_model(
        a in prop::collection::vec(1u32..=40, 0..12),
        b in prop::collection::vec(1u32..=40, 0..12),
    ) {
        let sa = VertexSet::from_ids(a.iter().copied());
        let sb = VertexSet::from_ids(b.iter().copied());
        let ma: BTreeSet<u32> = a.iter().copied().collect();
        let mb: BTreeSet<u32> = b.iter().copied().collect();

        prop_assert_eq!(sa.vertices(), ma.iter().copied().collect::<Vec<_>>());
        prop_assert_eq!(sa.len(), ma.len());
        prop_assert_eq!(sa.union(&sb).vertices(), ma.union(&mb).copied().collect::<Vec<_>>());
        prop_assert_eq!(
            sa.intersection(&sb).vertices(),
            ma.intersection(&mb).copied().collect::<Vec<_>>()
        );
        prop_assert_eq!(
            sa.difference(&sb).vertices(),
            ma.difference(&mb).copied().collect::<Vec<_>>()
        );
        prop_assert_eq!(sa.intersection_len(&sb), ma.intersection(&mb).count());
        prop_assert_eq!(sa.is_subset(&sb), ma.is_subset(&mb));
        prop_assert_eq!(sa.is_disjoint(&sb), ma.is_disjoint(&mb));
        prop_assert_eq!(sa.max_id(), ma.last().copied());
        for v in 1..=41 {
            prop_assert_eq!(sa.contains(v), ma.contains(&v));
        }
    }

    #[test]
    fn hypergraph_survives_serialize_parse(h in small_hypergraph(9, 3)) {
        let text = h.serialize();
        let back = Hypergraph::parse(&text).unwrap();
        prop_assert_eq!(back.n(), h.n());
        prop_assert_eq!(back.r(), h.r());
        prop_assert_eq!(back.edges(), h.edges());
    }

    #[test]
    fn matching_or_cover_verifies_itself(h in small_hypergraph(8, 3), k in 1usize..=4) {
        let outcome = greedy_matching_or_cover(&h, k).unwrap();
        prop_assert!(outcome.verify(&h, k).is_ok(), "{outcome:?} fails on its own link");
    }

    #[test]
    fn lucas_residues_stay_consistent(a in 0u64..=500, pick in 0usize..7) {
        let t = [1usize, 2, 3, 4, 6, 7, 8][pick];
        prop_assert!(lucas_residue_check(a, t).unwrap().consistent());
    }

    #[test]
    fn pigeonhole_witness_has_exact_intersection(
        m in 1u32..=8,
        seed in any::<u64>(),
    ) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sets: Vec<VertexSet> = (0..=m)
            .map(|_| {
                let mask: u32 = rng.gen_range(0..1u32 << m);
                VertexSet::from_ids((0..m).filter(|b| mask >> b & 1 == 1).map(|b| b + 1))
            })
            .collect();
        let w = frankl_katona(&sets).unwrap();
        prop_assert!(w.verify(&sets));
        let mut inter = sets[w.indices[0]].clone();
        for &i in &w.indices[1..] {
            inter = inter.intersection(&sets[i]);
        }
        prop_assert_eq!(inter.len(), w.s - 1);
    }

    #[test]
    fn random_families_fail_only_on_sizes(n in 1u32..=6, t_raw in 1usize..=3, seed in any::<u64>()) {
        let t = t_raw.min(n as usize);
        let fam = random_closed_covering_family(n, t, seed).unwrap();
        let members = fam.family();
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                prop_assert!(fam.contains(&a.intersection(b)), "closure broken at {a} {b}");
            }
        }
        let ids: Vec<u32> = (1..=n).collect();
        for t_set in k_subsets(&ids, t) {
            prop_assert!(
                members.iter().any(|m| t_set.is_subset(m)),
                "{t_set} not covered"
            );
        }
        let verdict = is_system(&fam, t).unwrap();
        prop_assert!(
            matches!(verdict, Some(SystemViolation::ForbiddenSize { .. })),
            "unexpected verdict {verdict:?}"
        );
    }

    #[test]
    fn type_function_round_trips_through_pairs(f in type_function()) {
        let values: Vec<u32> = f.to_pairs().into_iter().map(|(_, v)| v).collect();
        let back = TypeFunction::new(f.t(), values).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn growth_terminates_and_extraction_is_closed(f in type_function()) {
        let t = f.t();
        for start in TypeFunction::domain(t) {
            let trace = extending_sequence(&f, &start).unwrap();
            prop_assert!(trace.steps.len() <= t + 1, "too many steps from {start}");
            prop_assert!(start.is_subset(&trace.terminal));
            prop_assert_eq!(trace.chain.len(), trace.steps.len() + 1);
            // No t-subset of the terminal may still map outside it.
            for i_set in k_subsets(&trace.terminal.vertices(), t) {
                prop_assert!(trace.terminal.contains(f.get(&i_set)));
            }
        }
        if let Some(start) = reaching_start(&f) {
            prop_assert!(extending_sequence(&f, &start).unwrap().reaches_full(t));
        }

        let family = extract_family(&f);
        let members = family.family();
        for (i, a) in members.iter().enumerate() {
            prop_assert!(a.len() != t, "extraction contains the t-set {a}");
            for b in &members[i + 1..] {
                prop_assert!(family.contains(&a.intersection(b)));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn detector_agrees_with_tuple_scan(
        h in small_hypergraph(7, 3),
        t in 0usize..=2,
        k in 2usize..=3,
    ) {
        prop_assume!(t < h.r());
        let found = find_sunflower(&h, t, k).unwrap();
        match &found {
            Some(w) => {
                prop_assert!(w.verify(&h).is_ok(), "witness fails: {w:?}");
                prop_assert_eq!((w.t, w.k), (t, k));
            }
            None => prop_assert!(!tuples_contain_sunflower(&h, t, k)),
        }

        for threads in 1..=3usize {
            let par = find_sunflower_parallel(&h, t, k, threads).unwrap();
            prop_assert_eq!(par.is_some(), found.is_some());
            if let Some(w) = par {
                prop_assert!(w.verify(&h).is_ok());
            }
        }
    }

    #[test]
    fn greedy_witness_is_free_and_reproducible(
        n in 2u32..=10,
        r in 1usize..=3,
        t_raw in 0usize..=2,
        k in 2usize..=3,
        seed in any::<u64>(),
    ) {
        let t = t_raw.min(r - 1);
        let h = greedy_lower(n, r, t, k, seed).unwrap();
        prop_assert!(find_sunflower(&h, t, k).unwrap().is_none());
        let again = greedy_lower(n, r, t, k, seed).unwrap();
        prop_assert_eq!(again.serialize(), h.serialize());
    }

    #[test]
    fn applicable_constructions_stay_free(
        t in 0usize..=1,
        wide in 0usize..=1,
        k in 2usize..=4,
        pad in 0u32..=5,
    ) {
        let r = 2 * t + 1 + wide;
        let s = (k - 1).max(t + 1);
        let n = (s + r - t - 1) as u32 + pad;
        let h = small_kernel(n, r, t, k).unwrap();
        let expect = binomial((n as usize - s) as u64, (r - t - 1) as u64)
            * binomial(s as u64, (t + 1) as u64);
        prop_assert_eq!(h.edge_count() as u128, expect);
        prop_assert!(find_sunflower(&h, t, k).unwrap().is_none());

        let c = clique_bound(n, r, t, k).unwrap();
        prop_assert!(find_sunflower(&c, t, k).unwrap().is_none());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exact_value_is_sandwiched(
        r in 2usize..=3,
        pad in 0u32..=2,
        t_raw in 0usize..=2,
        k in 2usize..=3,
        seed in any::<u64>(),
    ) {
        let n = if r == 2 { 6 + pad } else { 4 + pad };
        let t = t_raw.min(r - 1);
        let res = exact_turan(n, r, t, k, &ExactConfig::default()).unwrap();
        prop_assert!(matches!(res.status, TuranStatus::Exact));
        let exact = res.exact_max.unwrap();
        prop_assert_eq!(res.lower_witness.edge_count() as u64, exact);
        prop_assert!(find_sunflower(&res.lower_witness, t, k).unwrap().is_none());
        prop_assert!(u128::from(exact) <= binomial(n as u64, r as u64));
        let greedy = greedy_lower(n, r, t, k, seed).unwrap().edge_count() as u64;
        prop_assert!(greedy <= exact, "greedy {greedy} above exact {exact}");
    }
}
