use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;

use condensation_core::par::{map_replicas, map_replicas_seq};
use condensation_core::samplers::{sample_gw_size, ConditionedSampler, Method};
use condensation_core::OffspringDistribution;

fn conditioned_trees(c: &mut Criterion) {
    let dist = OffspringDistribution::heavy_tail(2.5, 0.5).unwrap();
    let mut group = c.benchmark_group("conditioned_trees");
    group.sample_size(10);
    for n in [1_000usize, 5_000] {
        let sampler = ConditionedSampler::new(&dist, n, Method::ExactBridge).unwrap();
        let replicas = 64u64;
        group.throughput(Throughput::Elements(replicas));
        group.bench_with_input(BenchmarkId::new("rayon", n), &n, |b, _| {
            b.iter(|| {
                black_box(map_replicas(1, "bench", replicas, |_, rng| {
                    sampler.sample(rng).unwrap().stats().delta
                }))
            })
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, _| {
            b.iter(|| {
                black_box(map_replicas_seq(1, "bench", replicas, |_, rng| {
                    sampler.sample(rng).unwrap().stats().delta
                }))
            })
        });
    }
    group.finish();
}

fn progeny(c: &mut Criterion) {
    let dist = OffspringDistribution::heavy_tail(3.0, 0.5).unwrap();
    let mut group = c.benchmark_group("gw_progeny");
    let replicas = 100_000u64;
    group.throughput(Throughput::Elements(replicas));
    group.bench_function("rayon", |b| {
        b.iter(|| black_box(map_replicas(2, "bench", replicas, |_, rng| sample_gw_size(&dist, rng, 1 << 20).ok())))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(map_replicas_seq(2, "bench", replicas, |_, rng| sample_gw_size(&dist, rng, 1 << 20).ok())))
    });
    group.finish();
}

criterion_group!(benches, conditioned_trees, progeny);
criterion_main!(benches);
