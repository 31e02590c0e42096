//! Parallel vs sequential timings for the two hot loops: the quartic
//! associativity scan and batched ppt decisions. Build with the default
//! `parallel` feature so both entry points exist; the default functions
//! dispatch to rayon, the `_seq` twins never do.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use hypal::corpus;
use hypal::haar::{ppt_batch, ppt_batch_seq};
use hypal::hypergroup::{associativity_witness, associativity_witness_seq};
use hypal::sample;

fn bench_associativity(c: &mut Criterion) {
    let mut group = c.benchmark_group("associativity_scan");
    group.sample_size(20);
    for n in [8usize, 12, 16] {
        let table = corpus::gen_group(&corpus::z(n)).into_table();
        group.bench_with_input(BenchmarkId::new("default", n), &table, |b, t| {
            b.iter(|| black_box(associativity_witness(black_box(t))));
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &table, |b, t| {
            b.iter(|| black_box(associativity_witness_seq(black_box(t))));
        });
    }
    group.finish();
}

fn bench_ppt_batch(c: &mut Criterion) {
    let d4c = corpus::gen_conjugacy(&corpus::d4()).into_table();
    let fs = sample::random_positive_functions(d4c.len(), 16, 0);
    let mut group = c.benchmark_group("ppt_batch_d4c_16_functions");
    group.sample_size(20);
    group.bench_function("default", |b| {
        b.iter(|| black_box(ppt_batch(black_box(&d4c), black_box(&fs)).unwrap()));
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(ppt_batch_seq(black_box(&d4c), black_box(&fs)).unwrap()));
    });
    group.finish();
}

criterion_group!(benches, bench_associativity, bench_ppt_batch);
criterion_main!(benches);
