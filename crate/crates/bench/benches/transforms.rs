use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use ifns_core::{cesaro, holder, iterated_log, log_mean, Sequence};

fn bench_scalar_means(c: &mut Criterion) {
    let ex1 = Sequence::ex1();
    let ex2 = Sequence::ex2();
    c.bench_function("cesaro_ex1_10k", |b| {
        b.iter(|| cesaro(black_box(&ex1), 10_000).unwrap())
    });
    c.bench_function("holder3_ex2_10k", |b| {
        b.iter(|| holder(black_box(&ex2), 3, 10_000).unwrap())
    });
}

fn bench_grid_means(c: &mut Criterion) {
    let ex3 = Sequence::ex3(101);
    let ex4 = Sequence::ex4(101);
    c.bench_function("log_mean_ex3_2k_grid101", |b| {
        b.iter(|| log_mean(black_box(&ex3), 2_000).unwrap())
    });
    c.bench_function("iterlog2_ex4_2k_grid101", |b| {
        b.iter(|| iterated_log(black_box(&ex4), 2, 2_000).unwrap())
    });
}

criterion_group!(benches, bench_scalar_means, bench_grid_means);
criterion_main!(benches);
