use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use ginv_core::gen::gen_core_invertible;
use ginv_core::{
    core_inverse, core_inverse_via_projection, drazin_inverse, run_suite, SuiteConfig, SuiteId, TheoremId, Tolerance,
};

fn inverses(c: &mut Criterion) {
    let tol = Tolerance::default();
    let mut group = c.benchmark_group("core_inverse");
    for n in [4, 8, 16] {
        let a = gen_core_invertible(n, n / 2, 1);
        group.bench_with_input(BenchmarkId::new("svd", n), &a, |b, a| b.iter(|| core_inverse(black_box(a), tol)));
        group.bench_with_input(BenchmarkId::new("projection", n), &a, |b, a| {
            b.iter(|| core_inverse_via_projection(black_box(a), tol))
        });
    }
    group.finish();

    let mut group = c.benchmark_group("drazin");
    for n in [4, 8, 16] {
        let a = gen_core_invertible(n, n / 2, 2);
        let a = &(&a * &a) + &a;
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| b.iter(|| drazin_inverse(black_box(a), tol)));
    }
    group.finish();
}

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for id in [TheoremId::Theorem3_4, TheoremId::Theorem4_2] {
        let cfg = SuiteConfig::new(SuiteId::One(id), 100, 1);
        group.bench_function(id.as_str(), |b| b.iter(|| run_suite(black_box(&cfg))));
    }
    group.finish();
}

criterion_group!(benches, inverses, suites);
criterion_main!(benches);
