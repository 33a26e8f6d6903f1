use std::hint::black_box;

use betagray::fullgray::{full_list, FullGray};
use betagray::maps::{map_to_tree, tree_to_map};
use betagray::{decode, dyck_gray, enumerate_trees, LabeledTree, RootMode};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

fn dyck(c: &mut Criterion) {
    let mut g = c.benchmark_group("dyck_gray");
    for m in [8, 10, 12] {
        g.throughput(Throughput::Elements(dyck_gray(m, m).unwrap().len() as u64));
        g.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| b.iter(|| dyck_gray(black_box(m), m).unwrap()));
    }
    g.finish();
}

fn listing(c: &mut Criterion) {
    let mut g = c.benchmark_group("full_list");
    g.sample_size(20);
    for n in [6, 8, 9] {
        g.throughput(Throughput::Elements(full_list(n, 0, 1).unwrap().len() as u64));
        g.bench_with_input(BenchmarkId::new("materialized", n), &n, |b, &n| {
            b.iter(|| full_list(black_box(n), 0, 1).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("streamed", n), &n, |b, &n| {
            b.iter(|| FullGray::new(black_box(n), 0, 1).unwrap().map(|r| r.unwrap().index).last())
        });
    }
    g.finish();
}

fn bijection(c: &mut Criterion) {
    let trees: Vec<LabeledTree> = enumerate_trees(7, 0, 1, RootMode::Star)
        .unwrap()
        .iter()
        .map(|code| decode(code, 0, 1).unwrap().with_root_mode(RootMode::SumPlusOne))
        .collect();
    let maps: Vec<_> = trees.iter().map(|t| tree_to_map(t).unwrap()).collect();
    let mut g = c.benchmark_group("bijection_n7");
    g.sample_size(20);
    g.throughput(Throughput::Elements(trees.len() as u64));
    g.bench_function("tree_to_map", |b| {
        b.iter(|| trees.iter().map(|t| tree_to_map(black_box(t)).unwrap()).collect::<Vec<_>>())
    });
    g.bench_function("map_to_tree", |b| {
        b.iter(|| maps.iter().map(|m| map_to_tree(black_box(m)).unwrap()).collect::<Vec<_>>())
    });
    g.finish();
}

criterion_group!(benches, dyck, listing, bijection);
criterion_main!(benches);
