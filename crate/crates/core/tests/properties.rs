use std::collections::{BTreeSet, HashSet};

use betagray::dyck::{first_word, last_word};
use betagray::fullgray::distance;
use betagray::maps::{map_to_tree, tree_to_map};
use betagray::shapegray::{
    hamming, label_gray_cycle, label_gray_path, no_position_reverts, rotate_to_zero, single_position_steps,
};
use betagray::trees::{decompose, lambda, oplus_fold, unlambda, validate};
use betagray::{decode, dyck_gray, encode, LabeledTree, PrefixWord, RootMode, Shape, Symbol};
use proptest::prelude::*;

/// Every labeling of `shape`, written independently of the generators.
fn brute_labelings(shape: &Shape, a: u32, b: u32, mode: RootMode) -> BTreeSet<Vec<Symbol>> {
    fn sub(shape: &Shape, v: usize, a: u32, b: u32) -> Vec<Vec<u32>> {
        let mut acc: Vec<(u32, Vec<u32>)> = vec![(0, vec![])];
        for &c in shape.children(v) {
            let opts = sub(shape, c, a, b);
            acc = acc
                .into_iter()
                .flat_map(|(s, t)| {
                    opts.iter().map(|o| (s + o[0], t.iter().chain(o).copied().collect::<Vec<_>>())).collect::<Vec<_>>()
                })
                .collect();
        }
        if shape.is_leaf(v) {
            return vec![vec![a]];
        }
        acc.into_iter()
            .flat_map(|(s, t)| (a..=b + s).map(move |l| std::iter::once(l).chain(t.iter().copied()).collect()))
            .collect()
    }
    let all = sub(shape, 0, a, b);
    all.into_iter()
        .map(|t| {
            let mut syms: Vec<Symbol> = t.into_iter().map(Symbol::Value).collect();
            if mode == RootMode::Star {
                syms[0] = Symbol::Star;
            } else if shape.len() == 1 {
                syms[0] = Symbol::Value(a);
            }
            syms
        })
        .collect()
}

fn shape_strategy(max_vertices: usize) -> impl Strategy<Value = Shape> {
    (0..max_vertices).prop_flat_map(|m| {
        let words = dyck_gray(m, m).unwrap();
        (0..words.len()).prop_map(move |i| Shape::from_word(&words[i]).unwrap())
    })
}

fn params() -> impl Strategy<Value = (u32, u32)> {
    prop_oneof![Just((0, 1)), Just((1, 1)), Just((2, 2)), Just((0, 2))]
}

/// A random β(0,1)-tree in sum-plus-one mode, built by random λ/⊕ steps.
fn tree_strategy(max_vertices: usize) -> impl Strategy<Value = LabeledTree> {
    (shape_strategy(max_vertices), any::<u64>()).prop_map(|(shape, seed)| {
        let shape = if shape.len() < 2 { Shape::from_word(&"(1,0)".parse().unwrap()).unwrap() } else { shape };
        let list = label_gray_path(&shape, 0, 1, RootMode::Star).unwrap();
        let t = &list.tuples()[(seed % list.len() as u64) as usize];
        let labels = t.iter().map(|s| s.value().unwrap_or(0)).collect();
        LabeledTree::new(shape, labels, RootMode::Star).unwrap().with_root_mode(RootMode::SumPlusOne)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn dyck_lists_are_cyclic_two_gray(m in 0usize..10, k_seed in 0usize..10) {
        let k = k_seed % (m + 1);
        let words = dyck_gray(m, k).unwrap();
        let distinct: HashSet<_> = words.iter().collect();
        prop_assert_eq!(distinct.len(), words.len());
        prop_assert!(words.iter().all(|w| w.ones() == m && w.zeros() == k));
        if words.len() > 1 {
            for i in 0..words.len() {
                prop_assert_eq!(words[i].hamming(&words[(i + 1) % words.len()]), Some(2));
            }
        }
        prop_assert_eq!(&words[0], &first_word(m, k).unwrap());
        prop_assert_eq!(words.last().unwrap(), &last_word(m, k).unwrap());
    }

    #[test]
    fn prefix_word_text_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..80)) {
        if let Ok(w) = PrefixWord::from_bools(bits.iter().copied()) {
            prop_assert_eq!(w.to_string().parse::<PrefixWord>().unwrap(), w.clone());
            prop_assert_eq!(w.iter().collect::<Vec<_>>(), bits);
        }
    }

    #[test]
    fn label_lists_are_gray_permutations(shape in shape_strategy(8), (a, b) in params(), star in any::<bool>()) {
        let mode = if star { RootMode::Star } else { RootMode::Internal };
        let oracle = brute_labelings(&shape, a, b, mode);
        for list in [label_gray_path(&shape, a, b, mode).unwrap(), label_gray_cycle(&shape, a, b, mode).unwrap()] {
            let set: BTreeSet<Vec<Symbol>> = list.tuples().iter().cloned().collect();
            prop_assert_eq!(set.len(), list.len());
            prop_assert_eq!(&set, &oracle);
            prop_assert!(single_position_steps(list.tuples(), list.is_cyclic()));
            prop_assert!(no_position_reverts(list.tuples(), list.is_cyclic()));
        }
    }

    #[test]
    fn rotated_cycles_start_at_base(shape in shape_strategy(8), (a, b) in params()) {
        let list = rotate_to_zero(&label_gray_cycle(&shape, a, b, RootMode::Star).unwrap()).unwrap();
        prop_assert_eq!(&list.tuples()[0], &list.base_tuple());
        let l = list.tuples();
        if l.len() > 1 {
            prop_assert_eq!(hamming(&l[l.len() - 1], &l[0]), 1);
        }
    }

    #[test]
    fn labels_respect_capacity(shape in shape_strategy(8), (a, b) in params()) {
        for t in label_gray_cycle(&shape, a, b, RootMode::Internal).unwrap().tuples() {
            let labels = t.iter().map(|s| s.value().unwrap()).collect();
            let tree = LabeledTree::new(shape.clone(), labels, RootMode::Internal).unwrap();
            prop_assert!(validate(&tree, a, b).unwrap().is_valid());
        }
    }

    #[test]
    fn code_round_trip_and_distance_metric(x in tree_strategy(9), y in tree_strategy(9), z in tree_strategy(9)) {
        let cx = encode(&x);
        prop_assert_eq!(decode(&cx, 0, 1).unwrap(), x.with_root_mode(RootMode::Star));
        prop_assert_eq!(cx.to_string().parse::<betagray::TreeCode>().unwrap(), cx.clone());
        let (cy, cz) = (encode(&y), encode(&z));
        if cx.vertices() == cy.vertices() && cy.vertices() == cz.vertices() {
            let d = |p, q| distance(p, q).unwrap();
            prop_assert_eq!(d(&cx, &cy), d(&cy, &cx));
            prop_assert!(d(&cx, &cz) <= d(&cx, &cy) + d(&cy, &cz));
            prop_assert_eq!(d(&cx, &cx), 0);
        } else if cx.vertices() != cy.vertices() {
            prop_assert!(distance(&cx, &cy).is_err());
        }
    }

    #[test]
    fn tree_operations_invert(t in tree_strategy(9)) {
        if t.is_irreducible() {
            let (below, i) = unlambda(&t).unwrap();
            prop_assert_eq!(lambda(&below, i).unwrap(), t.clone());
        } else {
            let parts = decompose(&t).unwrap();
            prop_assert_eq!(parts.len(), t.sub());
            prop_assert!(parts.iter().all(LabeledTree::is_irreducible));
            prop_assert_eq!(oplus_fold(&parts).unwrap(), t.clone());
        }
    }

    #[test]
    fn bijection_round_trips(t in tree_strategy(10)) {
        let m = tree_to_map(&t).unwrap();
        prop_assert_eq!(m.vertex_count(), 2 * (t.len() - 1));
        prop_assert_eq!(m.f1r3(), t.root().unwrap() as usize);
        prop_assert_eq!(m.s1r3(), t.sub());
        prop_assert_eq!(map_to_tree(&m).unwrap(), t.clone());
        prop_assert_eq!(map_to_tree(&m.canonicalized()).unwrap(), t);
    }
}
