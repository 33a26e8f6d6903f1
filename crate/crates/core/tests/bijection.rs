use std::collections::HashSet;

use betagray::maps::{
    apply_op1, apply_op2, apply_op3, base_map, inspect, map_to_tree, tree_to_map, undo_irreducible, CanonicalMap,
    Peeled, RawMap, RotationMap,
};
use betagray::verify::{check_map, count_bicubic, enumerate_trees};
use betagray::{decode, LabeledTree, RootMode};

/// Vertex `v` owns darts `3v..3v+3`, listed counterclockwise.
fn drawn(pairs: &[(usize, usize)], root: usize) -> RotationMap {
    let sigma = (0..12).map(|d| d - d % 3 + (d + 1) % 3).collect();
    let mut alpha = vec![usize::MAX; 12];
    for &(x, y) in pairs {
        alpha[x] = y;
        alpha[y] = x;
    }
    RotationMap::new(RawMap { sigma, alpha, root }).unwrap()
}

/// Four-vertex bicubic maps drawn by hand, with the face colours read off
/// the drawings as (dart, colour of the face on its right).
fn hand_drawn() -> Vec<(RotationMap, Vec<(usize, u8)>)> {
    // white a, black b, white c, black d on a line; digon between b and c,
    // a and d joined by two arcs around it
    let line = drawn(&[(0, 11), (2, 9), (1, 5), (3, 8), (4, 7), (6, 10)], 9);
    // square a b d c with doubled bottom and top edges
    let square = [(0, 4), (2, 5), (1, 8), (3, 11), (6, 10), (7, 9)];
    vec![
        (line, vec![(9, 3), (8, 3), (4, 3), (3, 1), (7, 2)]),
        (drawn(&square, 9), vec![(9, 3), (0, 2), (4, 1), (6, 1), (10, 2)]),
        (drawn(&square, 8), vec![(8, 3), (0, 1), (4, 2), (6, 2), (10, 1)]),
    ]
}

fn trees(n: usize) -> Vec<LabeledTree> {
    enumerate_trees(n, 0, 1, RootMode::Star)
        .unwrap()
        .iter()
        .map(|c| decode(c, 0, 1).unwrap().with_root_mode(RootMode::SumPlusOne))
        .collect()
}

#[test]
fn hand_drawn_colours_agree() {
    for (m, colours) in hand_drawn() {
        for (d, c) in colours {
            assert_eq!(m.face_color(m.face_of(d)), c, "dart {d}");
        }
    }
}

#[test]
fn four_vertex_images_are_the_hand_drawn_maps() {
    let expected: HashSet<CanonicalMap> = hand_drawn().iter().map(|(m, _)| m.canonical()).collect();
    assert_eq!(expected.len(), 3);
    let images: HashSet<CanonicalMap> = trees(3).iter().map(|t| tree_to_map(t).unwrap().canonical()).collect();
    assert_eq!(images, expected);
}

#[test]
fn bijection_up_to_seven_vertices() {
    for n in 2..=7 {
        let mut images = HashSet::new();
        for t in trees(n) {
            let m = tree_to_map(&t).unwrap();
            assert!(check_map(m.raw()).pass);
            assert_eq!(map_to_tree(&m).unwrap(), t);
            images.insert(m.canonical());
        }
        assert_eq!(count_bicubic(n as u64 - 1).unwrap(), images.len().into());
    }
}

#[test]
fn operations_move_statistics() {
    for n in 2..=6 {
        for t in trees(n) {
            let m = tree_to_map(&t).unwrap();
            let grown = apply_op1(&m);
            assert_eq!(grown.f1r3(), m.f1r3() + 1);
            assert!(grown.is_irreducible());
            for i in 1..=m.f1r3() {
                let g = apply_op2(&m, i).unwrap();
                assert_eq!((g.f1r3(), g.s1r3()), (i, 1));
                assert!(inspect(g.raw()).passed());
                match undo_irreducible(&g).unwrap() {
                    Peeled::Op2(prev, j) => assert_eq!((prev.canonical(), j), (m.canonical(), i)),
                    Peeled::Op1(_) => panic!("op2 image peeled as op1"),
                }
            }
        }
    }
}

#[test]
fn chaining_matches_tree_sum() {
    let small: Vec<LabeledTree> = (2..=4).flat_map(trees).filter(LabeledTree::is_irreducible).collect();
    for u in &small {
        for v in &small {
            if u.len() + v.len() > 6 {
                continue;
            }
            let sum = betagray::trees::oplus(u, v).unwrap();
            let chained = apply_op3(&[tree_to_map(u).unwrap(), tree_to_map(v).unwrap()]).unwrap();
            assert_eq!(tree_to_map(&sum).unwrap(), chained);
            assert_eq!(chained.s1r3(), 2);
        }
    }
}

#[test]
fn base_map_is_the_two_vertex_tree() {
    let t = map_to_tree(&base_map()).unwrap();
    assert_eq!(t.labels(), &[1, 0]);
    assert!(tree_to_map(&LabeledTree::trivial()).is_err());
}
