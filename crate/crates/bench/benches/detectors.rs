use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use ifns_core::diagnostics::TestParams;
use ifns_core::{cesaro, eps_bad_set, slow_osc_falsify, stat_limit_verdict, Element, Sequence};

fn bench_bad_sets(c: &mut Criterion) {
    let table = cesaro(&Sequence::ex1(), 10_000).unwrap();
    let a = Element::Scalar(1.0);
    c.bench_function("eps_bad_set_sigma_ex1_10k", |b| {
        b.iter(|| eps_bad_set(black_box(&table), &a, 1.0, 0.1, 10_000).unwrap())
    });
    let params = TestParams {
        eps_grid: vec![0.25, 0.1],
        ..TestParams::default()
    };
    c.bench_function("stat_verdict_sigma_ex1_10k_6cells", |b| {
        b.iter(|| stat_limit_verdict(black_box(&table), &a, &params).unwrap())
    });
}

fn bench_falsifier(c: &mut Criterion) {
    let h = Sequence::harmonic_partial_sums();
    c.bench_function("slow_osc_falsify_harmonic_1k", |b| {
        b.iter(|| slow_osc_falsify(black_box(&h), 1.0, 0.5, 2.0, 1, 1_000, 10_000_000).unwrap())
    });
}

criterion_group!(benches, bench_bad_sets, bench_falsifier);
criterion_main!(benches);
