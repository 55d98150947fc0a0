use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use forestlab::graph::find_bridges;
use forestlab::identities::half_constant;
use forestlab::prufer::decode;
use forestlab::{mass_distribution, PrueferCode, TreeSampler};
use forestlab_bench::{ladder_graph, weights};

fn bridges(c: &mut Criterion) {
    let mut group = c.benchmark_group("find_bridges");
    for n in [16, 64] {
        let g = ladder_graph(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| find_bridges(black_box(g)))
        });
    }
    group.finish();
}

fn distribution(c: &mut Criterion) {
    let w = weights(&[1, 2, 1, 3, 1, 1, 2]);
    c.bench_function("mass_distribution n=7", |b| {
        b.iter(|| mass_distribution(black_box(&w)).unwrap())
    });
}

fn prufer_decode(c: &mut Criterion) {
    let code = PrueferCode::new(64, (0..62).map(|i| (i * 37) % 64 + 1).collect()).unwrap();
    c.bench_function("prufer decode n=64", |b| {
        b.iter(|| decode(black_box(&code)))
    });
}

fn sampler(c: &mut Criterion) {
    let sampler = TreeSampler::new(&weights(&[2, 1, 1, 3, 1])).unwrap();
    c.bench_function("sample_counts 2^16", |b| {
        b.iter(|| sampler.sample_counts(black_box(7), 1 << 16).unwrap())
    });
}

fn constant(c: &mut Criterion) {
    c.bench_function("half_constant 10^5", |b| {
        b.iter(|| half_constant(black_box(100_000)))
    });
}

criterion_group!(
    benches,
    bridges,
    distribution,
    prufer_decode,
    sampler,
    constant
);
criterion_main!(benches);
