use std::collections::BTreeSet;

use proptest::prelude::*;
use translab::chainlab::{
    approximation, build_chain, intersection_witnesses, triangle_scan, Chain, SumClassifier,
};
use translab::format::{from_text, to_text};
use translab::gf2::Word;
use translab::poset::{aligned_copy, amalgamate, leq, validate, Clause, Label};

fn labels() -> impl Strategy<Value = Vec<Label>> {
    prop::collection::btree_set(0u64..50, 1..=5)
        .prop_flat_map(|s| Just(s.into_iter().collect::<Vec<_>>()).prop_shuffle())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn chains_are_valid_and_stable(ls in labels(), target in 1usize..50, seed in any::<u64>()) {
        let c = build_chain(&ls, target, seed).unwrap();
        let last = c.last();
        prop_assert!(last.n >= target);
        prop_assert!(ls.iter().all(|l| last.u.contains(l)));
        prop_assert_eq!(&c.stages()[0].u, &BTreeSet::from([ls[0]]));
        for p in c.stages() {
            prop_assert!(!validate(p).iter().any(|v| v.clause == Clause::Disjoint));
            prop_assert!(validate(p).is_empty());
        }
        for w in c.stages().windows(2) {
            prop_assert!(leq(&w[0], &w[1]).unwrap());
        }
        let g = approximation(&c).unwrap();
        prop_assert_eq!(g.n, last.n);
        prop_assert_eq!(&g.h, &last.eta);
    }

    #[test]
    fn labels_enter_in_order(ls in labels(), seed in any::<u64>()) {
        let c = build_chain(&ls, 1, seed).unwrap();
        // No scratch labels are needed without a height target.
        prop_assert_eq!(c.len(), ls.len());
        for (i, p) in c.stages().iter().enumerate() {
            prop_assert_eq!(&p.u, &ls[..=i].iter().copied().collect::<BTreeSet<_>>());
        }
    }

    #[test]
    fn four_certified_witnesses(ls in labels(), target in 1usize..40, seed in any::<u64>()) {
        let c = build_chain(&ls, target, seed).unwrap();
        let g = approximation(&c).unwrap();
        let us: Vec<Label> = g.h.keys().copied().collect();
        for (i, &a) in us.iter().enumerate() {
            for &b in &us[i + 1..] {
                let ws = intersection_witnesses(&g, a, b).unwrap();
                let words: BTreeSet<&Word> = ws.iter().map(|w| &w.word).collect();
                prop_assert_eq!(words.len(), 4);
                for w in &ws {
                    for m in [&w.via_alpha, &w.via_beta] {
                        prop_assert!(g.trees[m.tree].contains(&m.leaf));
                        prop_assert_eq!(&g.h[&m.label].add(&m.leaf).unwrap(), &w.word);
                    }
                }
            }
        }
    }

    #[test]
    fn witnesses_restrict_to_earlier_stages(seed in any::<u64>(), target in 5usize..40) {
        let c = build_chain(&[3, 7], target, seed).unwrap();
        let late = approximation(&c).unwrap();
        let late_ws = intersection_witnesses(&late, 3, 7).unwrap();
        for (k, _) in c.stages().iter().enumerate().filter(|(_, p)| p.u.contains(&7)) {
            let early = approximation(&Chain::new(c.stages()[..=k].to_vec()).unwrap()).unwrap();
            let ws = intersection_witnesses(&early, 3, 7).unwrap();
            for (x, y) in ws.iter().zip(&late_ws) {
                prop_assert_eq!(&y.word.restrict(early.n).unwrap(), &x.word);
            }
        }
    }

    #[test]
    fn no_zero_triangles_in_constructed_conditions(ls in labels(), seed in any::<u64>(), root in 1usize..4) {
        let p = build_chain(&ls, 1, seed).unwrap().last().clone();
        prop_assert_eq!(triangle_scan(&p).unwrap(), None);
        if root < p.u.len() {
            let q = aligned_copy(&p, root).unwrap();
            let am = amalgamate(&p, &q).unwrap();
            prop_assert_eq!(triangle_scan(&am).unwrap(), None);
        }
    }

    #[test]
    fn chains_round_trip(ls in labels(), target in 1usize..30, seed in any::<u64>()) {
        let c = build_chain(&ls, target, seed).unwrap();
        let text = to_text(&c);
        let back: Chain = from_text(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(to_text(&back), text);
    }
}

#[test]
fn classifier_colors_agree_with_definitions() {
    let c = build_chain(&[1, 2, 3], 1, 0).unwrap();
    let p = c.last();
    let cl = SumClassifier::new(p).unwrap();
    for pr in p.label_pairs() {
        let (a, b) = (pr.lo(), pr.hi());
        let eab = p.eta[&a].add(&p.eta[&b]).unwrap();
        let rho = &p.mu[&pr].rho;
        let ones = [
            cl.classify(&eab).unwrap(),
            cl.classify(&eab.add(rho).unwrap()).unwrap(),
            cl.classify(rho).unwrap(),
        ]
        .map(|c| c.color());
        use translab::arrange::Color::*;
        assert_eq!(ones, [Some(One), Some(Zero), Some(Zero)]);
    }
}
