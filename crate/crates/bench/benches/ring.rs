use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qcrt_bench::{family, rng};
use qcrt_core::{FieldContext, LinPoly};
use std::hint::black_box;

fn ring(c: &mut Criterion) {
    let mut g = c.benchmark_group("ring");
    for m in [12, 64, 128] {
        let ctx = FieldContext::new(2, 1, m, 1).unwrap();
        let mut r = rng(m as u64);
        let a = LinPoly::random_monic(&ctx, 30, &mut r);
        let b = LinPoly::random_monic(&ctx, 15, &mut r);
        g.bench_with_input(BenchmarkId::new("compose", m), &m, |bch, _| bch.iter(|| black_box(&a).compose(&b)));
        g.bench_with_input(BenchmarkId::new("rquorem", m), &m, |bch, _| bch.iter(|| black_box(&a).rquorem(&b).unwrap()));
        g.bench_with_input(BenchmarkId::new("rgcd", m), &m, |bch, _| bch.iter(|| black_box(&a).rgcd(&b).unwrap()));
    }
    g.finish();
}

fn lift(c: &mut Criterion) {
    let mut g = c.benchmark_group("lift");
    let fam = family(2, 24, 40, 4, 1);
    let ctx = fam.context().clone();
    let mut r = rng(2);
    let res: Vec<_> = fam.degrees().iter().map(|&d| LinPoly::random(&ctx, d, &mut r)).collect();
    let flat = fam.flatten(&res).unwrap();
    fam.lift_matrix();
    g.bench_function("incremental", |b| b.iter(|| fam.lift_incremental(black_box(&res)).unwrap()));
    g.bench_function("direct", |b| b.iter(|| fam.lift_direct(black_box(&res)).unwrap()));
    g.bench_function("matrix", |b| b.iter(|| fam.lift_flat(black_box(&flat)).unwrap()));
    g.finish();
}

criterion_group!(benches, ring, lift);
criterion_main!(benches);
