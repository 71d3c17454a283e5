use clonex::closure::{enumerate_concepts, enumerate_intents, powerset_intents};
use clonex::clones::{
    analyze, clone_partition, is_clone_in_family, verify_lemma1, verify_lemma2, Side,
};
use clonex::io::{graph_to_context, read_cxt, write_cxt, Graph};
use clonex::perms::{
    enumerate_preserving_unpruned, is_preserving, search_involutions, search_permutations,
    Permutation,
};
use clonex::{BitSet, ClosureFamily, FormalContext};
use proptest::prelude::*;

fn context(max_g: usize, max_m: usize) -> impl Strategy<Value = FormalContext> {
    (0..=max_g, 0..=max_m).prop_flat_map(|(g, m)| {
        proptest::collection::vec(proptest::collection::vec(any::<bool>(), m), g).prop_map(
            move |cells| {
                FormalContext::new(
                    (0..g).map(|i| format!("g{i}")).collect(),
                    (0..m).map(|j| format!("m{j}")).collect(),
                    &cells,
                )
                .unwrap()
            },
        )
    })
}

fn subset(n: usize) -> impl Strategy<Value = BitSet> {
    proptest::collection::vec(any::<bool>(), n).prop_map(move |bits| {
        BitSet::from_indices(n, bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i))
    })
}

fn context_with_two_sets() -> impl Strategy<Value = (FormalContext, BitSet, BitSet)> {
    context(8, 8).prop_flat_map(|k| {
        let m = k.num_attributes();
        (Just(k), subset(m), subset(m))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn derivation_is_antitone_and_closure_is_a_closure((k, x, y) in context_with_two_sets()) {
        let small = x.intersection(&y);
        let d_small = k.derive_attributes(&small).unwrap();
        let d_x = k.derive_attributes(&x).unwrap();
        prop_assert!(d_x.is_subset(&d_small));
        let cx = k.close_attributes(&x).unwrap();
        prop_assert!(x.is_subset(&cx));
        prop_assert_eq!(k.close_attributes(&cx).unwrap(), cx.clone());
        prop_assert!(k.close_attributes(&small).unwrap().is_subset(&cx));
        // object side
        let a = d_x;
        prop_assert!(a.is_subset(&k.close_objects(&a).unwrap()));
    }

    #[test]
    fn dual_is_an_involution(k in context(8, 8)) {
        prop_assert_eq!(k.dual().dual(), k.clone());
        prop_assert_eq!(k.dual().density(), k.density());
    }

    #[test]
    fn reduce_is_idempotent_and_trace_partitions(k in context(8, 8)) {
        let (r, t) = k.reduce();
        prop_assert!(r.is_reduced());
        prop_assert_eq!(r.reduce().0, r.clone());
        for (kept, removed, merged, n) in [
            (&t.kept_attributes, &t.removed_reducible_attributes, t.merged_away_attributes(), k.num_attributes()),
            (&t.kept_objects, &t.removed_reducible_objects, t.merged_away_objects(), k.num_objects()),
        ] {
            let mut all: Vec<usize> = kept.iter().chain(removed).chain(&merged).copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        }
        let mut covered: Vec<usize> = t.merged_classes_attributes.concat();
        covered.sort_unstable();
        prop_assert_eq!(covered, (0..k.num_attributes()).collect::<Vec<_>>());
    }

    #[test]
    fn intents_agree_with_powerset_and_are_closed(k in context(8, 8)) {
        let fam = enumerate_intents(&k, 30).unwrap();
        prop_assert_eq!(&fam, &powerset_intents(&k).unwrap());
        prop_assert!(fam.contains(&BitSet::full(k.num_attributes())).unwrap());
        for x in &fam {
            prop_assert_eq!(&k.close_attributes(x).unwrap(), x);
            for y in &fam {
                prop_assert!(fam.contains(&x.intersection(y)).unwrap());
            }
        }
        prop_assert_eq!(fam.len(), enumerate_concepts(&k, 30).unwrap().len());
        let reduced = enumerate_intents(&k.reduce().0, 30).unwrap().len();
        let clarified = enumerate_intents(&k.clarify().0, 30).unwrap().len();
        prop_assert_eq!(reduced, clarified);
    }

    #[test]
    fn concepts_are_galois_pairs(k in context(6, 6)) {
        let concepts = enumerate_concepts(&k, 30).unwrap();
        let mut extents: Vec<&BitSet> = concepts.iter().map(|c| &c.extent).collect();
        extents.sort();
        extents.dedup();
        prop_assert_eq!(extents.len(), concepts.len());
        for c in &concepts {
            prop_assert_eq!(&k.derive_objects(&c.extent).unwrap(), &c.intent);
            prop_assert_eq!(&k.derive_attributes(&c.intent).unwrap(), &c.extent);
        }
    }

    #[test]
    fn partition_matches_oracle_on_clarified_context(k in context(10, 9)) {
        let part = clone_partition(&k, Side::Attributes);
        let (clar, trace) = k.clarify();
        let fam = enumerate_intents(&clar, 30).unwrap();
        let n = k.num_attributes();
        let rep = |x: usize| trace.merged_classes_attributes.iter().position(|c| c.contains(&x)).unwrap();
        for a in 0..n {
            for b in 0..n {
                let (ra, rb) = (rep(a), rep(b));
                let oracle = ra == rb || is_clone_in_family(&fam, ra, rb).unwrap();
                prop_assert_eq!(part.are_clones(a, b), oracle, "pair ({}, {})", a, b);
            }
        }
    }

    #[test]
    fn clone_relation_is_transitive_and_lemmas_hold(k in context(8, 8)) {
        let clar = k.clarify().0;
        let fam = enumerate_intents(&clar, 30).unwrap();
        let n = clar.num_attributes();
        let clone = |a: usize, b: usize| a == b || is_clone_in_family(&fam, a, b).unwrap();
        for a in 0..n {
            for b in 0..n {
                if a == b || !clone(a, b) {
                    continue;
                }
                prop_assert!(verify_lemma1(&clar, a, b).unwrap());
                prop_assert!(verify_lemma2(&clar, a, b).unwrap());
                for c in 0..n {
                    if clone(b, c) {
                        prop_assert!(clone(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn dual_swaps_report_sides(k in context(8, 8)) {
        let r = analyze(&k, "k");
        let d = analyze(&k.dual(), "k");
        prop_assert_eq!(d, r.swapped());
    }

    #[test]
    fn disjoint_union_keeps_clones(a in context(5, 5), b in context(5, 5)) {
        let rename = |k: &FormalContext, p: &str| FormalContext::from_rows(
            k.object_names().iter().map(|n| format!("{p}{n}")).collect(),
            k.attribute_names().iter().map(|n| format!("{p}{n}")).collect(),
            k.rows().to_vec(),
        ).unwrap();
        let (a, b) = (rename(&a, "L"), rename(&b, "R"));
        let u = a.union(&b).unwrap();
        let pu = clone_partition(&u, Side::Attributes);
        for (k, offset) in [(&a, 0), (&b, a.num_attributes())] {
            let p = clone_partition(k, Side::Attributes);
            for (x, y) in p.proper_pairs() {
                prop_assert!(pu.are_clones(x + offset, y + offset));
            }
        }
    }

    #[test]
    fn cxt_round_trip(k in context(10, 10)) {
        let text = write_cxt(&k);
        let back = read_cxt(&text).unwrap();
        prop_assert_eq!(write_cxt(&back), text);
        prop_assert_eq!(back, k);
    }

    #[test]
    fn one_mode_contexts_are_symmetric(edges in proptest::collection::btree_set((0usize..7, 0usize..7), 0..15)) {
        let g = Graph {
            nodes: (0..7).map(|i| format!("v{i}")).collect(),
            edges: edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect(),
        };
        let k = graph_to_context(&g, false).unwrap();
        for i in 0..7 {
            prop_assert!(!k.has(i, i));
            for j in 0..7 {
                prop_assert_eq!(k.has(i, j), k.has(j, i));
            }
        }
        let r = analyze(&k, "g");
        prop_assert_eq!(r.g_clones, r.m_clones);
        prop_assert_eq!(r.g_trivial, r.m_trivial);
    }
}

fn small_family() -> impl Strategy<Value = ClosureFamily> {
    context(6, 6).prop_map(|k| enumerate_intents(&k.clarify().0, 30).unwrap())
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|m| Permutation::from_mapping(m).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pruned_searches_equal_unpruned(fam in small_family()) {
        let full = enumerate_preserving_unpruned(&fam, 8).unwrap();
        let searched = search_permutations(&fam, None, 12, true).unwrap();
        prop_assert_eq!(&searched.found, &full);
        let inv: Vec<Permutation> = full.iter().filter(|p| p.is_involution()).cloned().collect();
        let n = fam.ground_set_size();
        let searched_inv = search_involutions(&fam, n / 2, 16, true).unwrap();
        prop_assert_eq!(&searched_inv.found, &inv);
        prop_assert!(is_preserving(&Permutation::identity(n), &fam).unwrap());
        for p in &full {
            prop_assert!(is_preserving(&p.inverse(), &fam).unwrap());
        }
    }

    #[test]
    fn preserving_transpositions_are_clone_pairs(k in context(7, 6)) {
        let clar = k.clarify().0;
        let fam = enumerate_intents(&clar, 30).unwrap();
        let part = clone_partition(&clar, Side::Attributes);
        let n = clar.num_attributes();
        for a in 0..n {
            for b in a + 1..n {
                let t = Permutation::transposition(n, a, b).unwrap();
                prop_assert_eq!(is_preserving(&t, &fam).unwrap(), part.are_clones(a, b));
            }
        }
    }

    #[test]
    fn apply_commutes_with_intersection(
        (p, x, y) in (1usize..12).prop_flat_map(|n| (permutation(n), subset(n), subset(n)))
    ) {
        let px = p.apply(&x).unwrap();
        prop_assert_eq!(px.count(), x.count());
        prop_assert_eq!(p.apply(&x.intersection(&y)).unwrap(), px.intersection(&p.apply(&y).unwrap()));
        let k = p.cycles().iter().fold(1u128, |acc, c| {
            let l = c.len() as u128;
            let mut g = (acc, l);
            while g.1 != 0 { g = (g.1, g.0 % g.1); }
            acc / g.0 * l
        });
        prop_assert_eq!(p.order(), k);
        let mut q = Permutation::identity(p.len());
        for _ in 0..p.order() {
            q = q.then(&p).unwrap();
        }
        prop_assert!(q.is_identity());
    }
}

#[test]
fn union_of_nominal_scales_is_all_nontrivial_clones() {
    let rename = |k: FormalContext, p: &str| {
        FormalContext::from_rows(
            k.object_names().iter().map(|n| format!("{p}{n}")).collect(),
            k.attribute_names().iter().map(|n| format!("{p}{n}")).collect(),
            k.rows().to_vec(),
        )
        .unwrap()
    };
    let u = rename(FormalContext::nominal_scale(3).unwrap(), "x")
        .union(&rename(FormalContext::nominal_scale(4).unwrap(), "y"))
        .unwrap();
    let r = analyze(&u, "u");
    assert_eq!(r.m_clones, 7);
    assert_eq!(r.m_trivial, 0);
    // the union of two nominal scales is itself a nominal scale
    assert_eq!(clone_partition(&u, Side::Attributes).classes.len(), 1);
}
