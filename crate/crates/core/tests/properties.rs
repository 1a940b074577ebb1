use std::sync::Arc;

use num_rational::Ratio;
use proptest::prelude::*;
use uniram_core::borelcodes::{basic_open, label_at, label_run, member, LabeledTree};
use uniram_core::fronts::{
    classify_set, front_from_closed, galvin_check2, hom_classify, hom_holds, ColorFamily, Front, Verdict,
};
use uniram_core::ideals::{
    branch_ad, by_name, diagonalize, down_member, g_select, uniform_q, validate, ClosedFamilyTree, DecreasingSeq,
    ExtRational, PartitionSeq, SubsetsOf, REGISTERED,
};
use uniram_core::selectors::{
    galvin_search, pseudo_to_selector, ramsey_select, GalvinOutcome, GALVIN_SEARCH_BUDGET,
};
use uniram_core::streams::{index_set, set_index, take, BinarySeq, FinSet, NatStream, SetIndex};
use uniram_core::workbench::{
    convergent_select, gamma_map, hom_sierpinski, run_gallery, sierpinski_coloring, OrderedEnumeration, Rational,
    GALLERY,
};

fn registered_streams() -> Vec<NatStream> {
    vec![
        NatStream::naturals(),
        NatStream::evens(),
        NatStream::odds(),
        NatStream::arith(3, 5),
        NatStream::powers(2),
        NatStream::powers(3),
        NatStream::explicit_prefix(FinSet::from([1, 4, 6]), NatStream::arith(0, 7)),
    ]
}

fn arb_stream() -> impl Strategy<Value = NatStream> {
    prop_oneof![
        (0u64..20, 1u64..8).prop_map(|(a, d)| NatStream::arith(a, d)),
        (2u64..5).prop_map(NatStream::powers),
        (proptest::collection::btree_set(0u64..40, 0..8), 1u64..5).prop_map(|(p, d)| {
            NatStream::explicit_prefix(p.into_iter().collect(), NatStream::arith(0, d))
        }),
    ]
}

fn arb_set(bound: u64, max_len: usize) -> impl Strategy<Value = FinSet> {
    proptest::collection::btree_set(0..bound, 0..=max_len).prop_map(|s| s.into_iter().collect())
}

fn registered_fronts() -> Vec<Front> {
    let evens: Arc<dyn ClosedFamilyTree> = Arc::new(SubsetsOf(NatStream::evens()));
    let sier: Arc<dyn ClosedFamilyTree> = Arc::new(hom_sierpinski(&OrderedEnumeration::stern_brocot()));
    vec![
        Front::tuples(1),
        Front::tuples(2),
        Front::tuples(3),
        Front::tuples(4),
        Front::schreier(1, 12),
        Front::schreier(2, 12),
        Front::from_closed(evens, 12),
        Front::from_closed(sier, 12),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn take_is_monotone(x in arb_stream(), n in 0u64..200, extra in 0u64..200) {
        let m = n + extra;
        let small = take(&x, n);
        let big = take(&x, m);
        prop_assert!(small.is_subset(&big));
        prop_assert_eq!(small, big.below(n));
    }

    #[test]
    fn tail_is_the_part_above(x in arb_stream(), n in 0u64..100) {
        let t = take(&x.tail(n), 300);
        prop_assert_eq!(t, take(&x, 300).above(n));
    }

    #[test]
    fn gamma_stays_inside(xi in 0usize..7, yi in 0usize..7, count in 1usize..12) {
        let (x, y) = (&registered_streams()[xi], &registered_streams()[yi]);
        if let Ok(g) = gamma_map(x, y, count) {
            prop_assert!(g.len() <= count);
            prop_assert!(g.iter().all(|v| take(x, v + 1).contains(v)));
        }
    }

    #[test]
    fn g_select_reaches_its_level(x in arb_stream(), n in 0u64..6, which in 0usize..3) {
        let phi = by_name(REGISTERED[which]).unwrap();
        if let Ok(s) = g_select(&*phi, &x, n, 300) {
            prop_assert!(s.is_subset(&take(&x, 300)));
            prop_assert!(phi.eval(&s) >= ExtRational::from_u64(n));
        }
    }

    #[test]
    fn uniform_q_is_a_selector(size in 1u64..5, levels in 1u64..5, x in arb_stream()) {
        let parts = PartitionSeq::blocks(x.clone(), size);
        let counting = by_name("counting").unwrap();
        if let Ok(q) = uniform_q(&*counting, &x, &parts, levels, 400) {
            prop_assert!(parts.is_partial_selector(&q));
            prop_assert!(q.len() as u64 >= levels);
        }
    }

    #[test]
    fn diagonal_is_selective(which in 0usize..4, step in 1u64..6, count in 1usize..10) {
        // diagonals of fast-growing sequences outrun any stream scan, so
        // the power thresholds stay at base 2
        let xs = match which {
            0 => DecreasingSeq::power_thresholds(NatStream::naturals(), 2),
            1 => DecreasingSeq::dyadic(NatStream::naturals()),
            2 => DecreasingSeq::tails(NatStream::arith(1, step)),
            _ => DecreasingSeq::from_fn(move |n| {
                NatStream::naturals().filter(move |m| m >= n * step && (n == 0 || m % 3 != 1))
            }),
        };
        let d = diagonalize(&xs, count);
        let h = d.max().map_or(0, |m| m + 1);
        for n in d.iter() {
            prop_assert!(d.above(n).is_subset(&take(&xs.at(n), h)));
        }
    }

    #[test]
    fn branches_are_almost_disjoint(k in 0u64..10, tail_a in any::<u64>(), tail_b in any::<u64>(), count in 1usize..14) {
        // agree on the first k bits, differ at bit k
        let a = BinarySeq::from_fn(move |i| if i < k { (tail_a >> (i % 64)) & 1 == 1 } else if i == k { false } else { (tail_a >> (i % 64)) & 1 == 0 });
        let b = BinarySeq::from_fn(move |i| if i < k { (tail_a >> (i % 64)) & 1 == 1 } else if i == k { true } else { (tail_b >> (i % 64)) & 1 == 1 });
        let x = NatStream::naturals();
        let common = branch_ad(&x, &a, count).unwrap().intersection(&branch_ad(&x, &b, count).unwrap());
        prop_assert!(common.len() as u64 <= k);
    }

    #[test]
    fn down_member_is_hereditary(t in arb_set(14, 8), mask in any::<u64>()) {
        let s = t.select(mask & ((1u64 << t.len()) - 1));
        let ks: Vec<Box<dyn ClosedFamilyTree>> = vec![
            Box::new(SubsetsOf(NatStream::evens())),
            Box::new(SubsetsOf(NatStream::arith(1, 3))),
            Box::new(hom_sierpinski(&OrderedEnumeration::stern_brocot())),
        ];
        for k in &ks {
            if down_member(&**k, &t) {
                prop_assert!(down_member(&**k, &s));
            }
        }
    }

    #[test]
    fn pseudo_selector_extends(y in arb_set(12, 4), n in 1u64..16) {
        let k = hom_sierpinski(&OrderedEnumeration::stern_brocot());
        if down_member(&k, &y) {
            let z = pseudo_to_selector(&k, &y, n).unwrap();
            prop_assert!(y.is_subset(&z));
            prop_assert!(down_member(&k, &z));
        }
    }

    #[test]
    fn galvin_witnesses_check(table in proptest::collection::vec(arb_set(10, 3), 0..12), k in 1usize..5, n in 4u64..11) {
        let table: std::collections::HashSet<FinSet> = table.into_iter().filter(|s| !s.is_empty()).collect();
        let f = |s: &FinSet| table.contains(s);
        match galvin_search(&f, &NatStream::naturals(), n, k, GALVIN_SEARCH_BUDGET) {
            Ok(GalvinOutcome::Witness(w)) => {
                prop_assert_eq!(w.len(), k);
                prop_assert!(galvin_check2(&f, &w).unwrap());
            }
            Ok(GalvinOutcome::NoWitness) => {
                let ground: FinSet = (0..n).collect();
                prop_assert!(ground.subsets().filter(|s| s.len() == k).all(|s| !galvin_check2(&f, &s).unwrap()));
            }
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn selector_reports_are_sound(seed in any::<u64>(), n in 2usize..4, horizon in 4u64..12, x in arb_stream()) {
        let f = move |s: &FinSet| s.iter().fold(seed, |h, m| (h ^ m).wrapping_mul(0x9e37_79b9_7f4a_7c15).rotate_left(29)) & 1 == 1;
        let r = ramsey_select(n, f, &x, horizon).unwrap();
        let c = ColorFamily::on_members(Front::tuples(n), "random", f);
        prop_assert!(r.output.is_subset(&take(&x, horizon)));
        prop_assert_eq!(classify_set(&c, &r.output), r.verdict);
        prop_assert!(hom_holds(&c, &r.output, r.verdict));
    }

    #[test]
    fn hom0_means_second_alternative(seed in any::<u64>(), horizon in 2u64..10) {
        let f = move |s: &FinSet| s.iter().fold(seed, |h, m| (h ^ m).wrapping_mul(0x9e37_79b9_7f4a_7c15).rotate_left(23)) % 5 == 0;
        let c = ColorFamily::on_members(Front::tuples(2), "random", f);
        let x = NatStream::naturals();
        if hom_classify(&c, &x, horizon) == Verdict::Hom0 {
            prop_assert!(galvin_check2(&*c.predicate(), &take(&x, horizon)).unwrap());
        }
    }

    #[test]
    fn neither_persists(seed in any::<u64>(), horizon in 2u64..10, extra in 0u64..5) {
        let f = move |s: &FinSet| s.iter().fold(seed, |h, m| (h ^ m).wrapping_mul(0x9e37_79b9_7f4a_7c15).rotate_left(31)) % 3 == 0;
        for front in [Front::tuples(2), Front::schreier(1, 16)] {
            let c = ColorFamily::on_members(front, "random", f);
            let x = NatStream::naturals();
            if hom_classify(&c, &x, horizon) == Verdict::Neither {
                prop_assert_eq!(hom_classify(&c, &x, horizon + extra), Verdict::Neither);
            }
        }
    }

    #[test]
    fn convergent_runs_have_monotone_variation(pts in proptest::collection::vec((0u64..100, 1u64..100), 2..14)) {
        let pts: Vec<Rational> = pts.into_iter().map(|(p, q)| Ratio::new(p % (q + 1), q)).collect();
        let n = pts.len() as u64;
        let e = OrderedEnumeration::from_points("random", pts);
        let h = convergent_select(&e, n).unwrap();
        let gaps = e.gaps(&h);
        let total: Rational = gaps.iter().copied().sum();
        let (a, b) = (e.point(h.min().unwrap()), e.point(h.max().unwrap()));
        prop_assert_eq!(total, if a > b { a - b } else { b - a });
    }
}

#[test]
fn index_round_trip() {
    for k in 0u64..1 << 16 {
        assert_eq!(set_index(&index_set(&SetIndex::from_u64(k))).to_u64(), Some(k));
    }
}

#[test]
fn registered_submeasures_satisfy_the_axioms() {
    for name in REGISTERED {
        assert_eq!(validate(&*by_name(name).unwrap(), 8), Ok(()), "{name}");
    }
}

#[test]
fn registered_sequences_decrease() {
    for (i, x) in registered_streams().into_iter().enumerate() {
        // odds and powers of 3 have no even elements, so their dyadic
        // sequence is not a sequence of infinite sets
        if i != 2 && i != 5 {
            assert!(DecreasingSeq::dyadic(x.clone()).is_decreasing_at(12, 500));
        }
        for xs in [
            DecreasingSeq::tails(x.clone()),
            DecreasingSeq::power_thresholds(x.clone(), 2),
            DecreasingSeq::constant(x.clone()),
        ] {
            assert!(xs.is_decreasing_at(12, 500));
        }
    }
}

#[test]
fn fronts_are_antichains() {
    let ground: FinSet = (0..12).collect();
    for b in registered_fronts() {
        for t in ground.subsets().filter(|t| b.is_member(t)) {
            let mut s = t.clone();
            while s.pop().is_some() {
                assert!(!b.is_member(&s), "{}: {s} and {t}", b.name());
            }
        }
    }
}

#[test]
fn derivatives_are_coherent() {
    let ground: FinSet = (0..12).collect();
    for b in registered_fronts() {
        for n in 0..11 {
            let d = b.derivative(n);
            for t in ground.above(n).subsets().filter(|t| !t.is_empty()) {
                assert_eq!(b.is_member(&t.prepend(n)), d.is_member(&t), "{} at {n}: {t}", b.name());
            }
        }
    }
}

#[test]
fn closed_family_round_trip() {
    let ks: Vec<Arc<dyn ClosedFamilyTree>> = vec![
        Arc::new(hom_sierpinski(&OrderedEnumeration::stern_brocot())),
        Arc::new(hom_sierpinski(&OrderedEnumeration::alternating())),
        Arc::new(uniram_core::ideals::HomOfPairColoring(Arc::new(|a, b| (a + b) % 3 == 0))),
    ];
    let ground: FinSet = (0..12).collect();
    for k in ks {
        let f = front_from_closed(Arc::clone(&k));
        for s in ground.subsets() {
            assert_eq!(galvin_check2(&*f, &s).unwrap(), down_member(&*k, &s), "{s}");
        }
    }
}

#[test]
fn sierpinski_homogeneity_is_monotonicity() {
    for e in [OrderedEnumeration::stern_brocot(), OrderedEnumeration::alternating()] {
        let c = sierpinski_coloring(&e);
        let ground: FinSet = (0..12).collect();
        for s in ground.subsets() {
            let v = s.as_slice();
            let pairs: Vec<bool> =
                (0..v.len()).flat_map(|i| (i + 1..v.len()).map(move |j| (i, j))).map(|(i, j)| c(v[i], v[j])).collect();
            assert_eq!(pairs.iter().all(|&b| b), e.increasing_on(&s), "{s}");
            assert_eq!(pairs.iter().all(|&b| !b), e.decreasing_on(&s), "{s}");
        }
    }
}

#[test]
fn gallery_outputs_grow() {
    for name in GALLERY {
        let sizes: Vec<usize> =
            [8u64, 12, 16, 24].iter().map(|&n| run_gallery(name, n).unwrap().report.output.len()).collect();
        assert!(sizes.windows(2).all(|w| w[0] <= w[1]), "{name}: {sizes:?}");
    }
}

fn tree_mask(t: &LabeledTree, code: u64, xs: &[Vec<bool>]) -> u16 {
    if t.is_leaf() {
        let w = basic_open(code);
        xs.iter().enumerate().filter(|(_, x)| x.starts_with(&w)).fold(0, |m, (p, _)| m | 1 << p)
    } else if t.label {
        !tree_mask(&t.children[&0], 0, xs)
    } else {
        t.children.iter().fold(0, |m, (&k, c)| m | tree_mask(c, k, xs))
    }
}

fn arb_tree(depth: u32) -> impl Strategy<Value = LabeledTree> {
    // leaves at coordinates ≤ 30 code cylinders of length ≤ 4
    let leaf = Just(LabeledTree::whole());
    leaf.prop_recursive(depth, 64, 4, |inner| {
        prop_oneof![
            proptest::collection::btree_map(0u64..31, inner.clone(), 1..4).prop_map(|m| LabeledTree::union(m)),
            inner.prop_map(|c| {
                let c = if c.label { LabeledTree::union([(0, c)]) } else { c };
                LabeledTree { label: true, children: [(0, c)].into_iter().collect() }
            }),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn borel_member_matches_set_semantics(t in arb_tree(5)) {
        prop_assume!(t.depth() <= 5);
        let xs: Vec<Vec<bool>> = (0u16..16).map(|p| (0..4).map(|i| p >> (3 - i) & 1 == 1).collect()).collect();
        let mask = tree_mask(&t, 0, &xs);
        let g = t.complement();
        for (p, x) in xs.iter().enumerate() {
            let m = member(x, &t).unwrap();
            prop_assert_eq!(m, mask >> p & 1 == 1);
            prop_assert_eq!(member(x, &g).unwrap(), !m);
            let s = label_run(x, &t).unwrap();
            prop_assert_eq!(s.label, m);
            for (path, label) in s.nodes() {
                prop_assert_eq!(label_at(x, &t, &path).unwrap(), label);
            }
        }
    }

    #[test]
    fn complement_is_an_involution_on_unions(t in arb_tree(4)) {
        let t = if t.label { LabeledTree::union([(0, t)]) } else { t };
        prop_assert_eq!(t.complement().complement(), t.clone());
        prop_assert!(t.complement().validate());
        for (path, _) in t.nodes() {
            prop_assert!(t.subtree(&path).unwrap().validate());
        }
    }
}
