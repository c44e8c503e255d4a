//! Benchmarks comparing the parallel and sequential sample scans on the
//! falsification and estimation hot paths.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use convex_cert::checker::{falsify, falsify_sequential, SampleConfig};
use convex_cert::conditions::ConditionId;
use convex_cert::funcs::catalog;

fn bench_falsify(c: &mut Criterion) {
    let mut group = c.benchmark_group("falsify_nest1_norm2_dim10");
    for &n in &[1_000usize, 10_000, 100_000] {
        let f = catalog::norm_sq_fn(10);
        let cfg = SampleConfig::default().with_samples(n).with_seed(7);
        group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, _| {
            b.iter(|| falsify(ConditionId::Nest1, &f, 2.0, &cfg).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, _| {
            b.iter(|| falsify_sequential(ConditionId::Nest1, &f, 2.0, &cfg).unwrap())
        });
    }
    group.finish();
}

fn bench_falsify_alpha(c: &mut Criterion) {
    let mut group = c.benchmark_group("falsify_nest5_diagq_dim5");
    let f = catalog::diag_quadratic(vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
    let cfg = SampleConfig::default().with_samples(20_000).with_seed(7);
    group.bench_function("parallel", |b| {
        b.iter(|| falsify(ConditionId::Nest5, &f, 10.0, &cfg).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| falsify_sequential(ConditionId::Nest5, &f, 10.0, &cfg).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_falsify, bench_falsify_alpha);
criterion_main!(benches);
