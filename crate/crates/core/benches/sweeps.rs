//! Sequential vs. rayon paths for the two batch workloads.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use grplus::exec::Execution;
use grplus::extremal::certify_sweep;
use grplus::optimizer::{minimize_with, OptimizerConfig};
use grplus::Tolerance;

fn modes() -> Vec<(&'static str, Execution)> {
    vec![
        ("sequential", Execution::Sequential),
        #[cfg(feature = "parallel")]
        ("parallel", Execution::Parallel),
    ]
}

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("certify_sweep");
    group.sample_size(10);
    for n in [6usize, 10] {
        for (name, exec) in modes() {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| certify_sweep(n, 2000, 1, Tolerance::default(), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn restarts(c: &mut Criterion) {
    let mut group = c.benchmark_group("minimize");
    group.sample_size(10);
    let cfg = OptimizerConfig {
        restarts: 8,
        max_iters: 5000,
        ..OptimizerConfig::new(6)
    };
    for (name, exec) in modes() {
        group.bench_function(name, |b| b.iter(|| minimize_with(&cfg, exec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, sweep, restarts);
criterion_main!(benches);
