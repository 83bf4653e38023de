use proptest::prelude::*;

use id_forge::identity::{canonical_identity, equivalent, realizes, BinaryWord};
use id_forge::measure::{complete_term_set, disjointify, eval, is_partition, parse_term, AtomSet};
use id_forge::{AlgebraElement, Coloring, DyadicMeasure, GeneratorId, Identity};

fn element() -> impl Strategy<Value = AlgebraElement> {
    (proptest::sample::subsequence((0u32..8).collect::<Vec<_>>(), 0..=5), any::<u64>()).prop_map(
        |(ids, bits)| {
            let k = ids.len();
            let mask = (1u64 << (1 << k)) - 1;
            let support = ids.into_iter().map(GeneratorId).collect();
            AlgebraElement::new(support, AtomSet::from_u64(1 << k, bits & mask)).unwrap()
        },
    )
}

fn coloring(max_n: usize, colors: u64) -> impl Strategy<Value = Coloring> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(0..colors, n * (n - 1) / 2).prop_map(move |c| Coloring::new(n, c).unwrap())
    })
}

fn sigma() -> impl Strategy<Value = Vec<(usize, usize, Vec<u32>)>> {
    proptest::collection::vec(
        (1usize..=3).prop_flat_map(|arity| {
            (
                Just(arity),
                0..(1usize << (1 << arity)),
                proptest::collection::vec(0u32..5, arity),
            )
        }),
        1..=4,
    )
}

proptest! {
    #[test]
    fn measure_is_finitely_additive(a in element(), b in element()) {
        let outside = b.difference(&a);
        prop_assert_eq!(a.measure().checked_add(&outside.measure()), Some(a.join(&b).measure()));
        prop_assert_eq!(a.meet(&b).measure().checked_add(&outside.measure()), Some(b.measure()));
        prop_assert_eq!(a.complement().measure(), a.measure().complement());
    }

    #[test]
    fn extension_keeps_measure(a in element(), extra in proptest::collection::vec(8u32..20, 0..4)) {
        let mut wider: Vec<GeneratorId> = a.support().iter().copied().chain(extra.into_iter().map(GeneratorId)).collect();
        wider.sort_unstable();
        wider.dedup();
        let ext = a.extend_to(&wider);
        prop_assert_eq!(ext.measure(), a.measure());
        prop_assert_eq!(ext.reduce(), a.reduce());
    }

    #[test]
    fn boolean_laws(a in element(), b in element()) {
        prop_assert_eq!(a.meet(&b).complement(), a.complement().join(&b.complement()));
        prop_assert!(a.meet(&b).is_subset(&a));
        prop_assert!(a.is_subset(&a.join(&b)));
        prop_assert!(a.symmetric_difference(&a).is_empty());
    }

    #[test]
    fn element_text_round_trips(a in element()) {
        let back: AlgebraElement = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn dyadic_text_and_order(n in 0u64..=256, m in 0u64..=256) {
        let a = DyadicMeasure::new(n, 8).unwrap();
        let b = DyadicMeasure::new(m, 8).unwrap();
        prop_assert_eq!(a.to_string().parse::<DyadicMeasure>().unwrap(), a.clone());
        prop_assert_eq!(a.cmp(&b), n.cmp(&m));
        prop_assert_eq!(a.cmp_fraction(n, 256), std::cmp::Ordering::Equal);
        prop_assert_eq!(a.checked_add(&b).is_some(), n + m <= 256);
    }

    #[test]
    fn term_text_round_trips(arity in 1usize..=3, index in 0usize..256) {
        let set = complete_term_set(arity).unwrap();
        let t = set.term(index % set.len());
        let back = parse_term(&t.to_string()).unwrap().widen(arity);
        prop_assert_eq!(back.truth_table(), t.truth_table());
        prop_assert_eq!(set.index_of(&back), Some(index % set.len()));
    }

    #[test]
    fn disjointify_gives_partitions_below_sigma(s in sigma()) {
        let input: Vec<_> = s
            .iter()
            .map(|(arity, i, g)| {
                let set = complete_term_set(*arity).unwrap();
                (set.term(*i), g.iter().copied().map(GeneratorId).collect::<Vec<_>>())
            })
            .collect();
        let rho = disjointify(&input).unwrap();
        let cells: Vec<AlgebraElement> = rho.iter().map(|(t, u)| eval(t, u).unwrap()).collect();
        prop_assert!(is_partition(&cells));
        for (m, (t, u)) in input.iter().enumerate() {
            prop_assert!(cells[m].is_subset(&eval(t, u).unwrap()));
        }
    }

    #[test]
    fn realization_is_reflexive_and_respects_restriction(c in coloring(5, 3), cut in 0usize..5) {
        prop_assert!(realizes(&c, &c));
        let keep: Vec<usize> = (0..c.n()).filter(|&v| v != cut % c.n()).collect();
        prop_assert!(realizes(&c, &c.restrict(&keep)));
    }

    #[test]
    fn realization_is_transitive(a in coloring(5, 3), b in coloring(4, 3), c in coloring(3, 3)) {
        if realizes(&a, &b) && realizes(&b, &c) {
            prop_assert!(realizes(&a, &c));
        }
    }

    #[test]
    fn canonical_form_is_a_class_invariant(c in coloring(5, 4), seed in any::<u64>()) {
        let n = c.n();
        let mut perm: Vec<usize> = (0..n).collect();
        // deterministic shuffle from the seed
        for i in (1..n).rev() {
            perm.swap(i, (seed >> (i * 4)) as usize % (i + 1));
        }
        let moved = c.permute(&perm);
        prop_assert_eq!(canonical_identity(&moved), canonical_identity(&c));
        prop_assert!(equivalent(&moved, &c));
        let id = canonical_identity(&c);
        prop_assert_eq!(id.to_string().parse::<Identity>().unwrap(), id.clone());
        prop_assert_eq!(canonical_identity(&id.representative()), id);
    }

    #[test]
    fn word_meets_are_common_prefixes(a in any::<u16>(), b in any::<u16>(), la in 0usize..12, lb in 0usize..12) {
        let x = BinaryWord::from_bits(u64::from(a), la);
        let y = BinaryWord::from_bits(u64::from(b), lb);
        let m = x.meet(&y);
        prop_assert!(m.is_prefix_of(&x) && m.is_prefix_of(&y));
        prop_assert_eq!(y.meet(&x), m);
    }
}
