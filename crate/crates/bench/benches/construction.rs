use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use permcycles_core::{construct_restricted, generate_uword, Mode};
use std::hint::black_box;

fn uwords(c: &mut Criterion) {
    let mut group = c.benchmark_group("generate_uword");
    for n in 4..=7 {
        group.bench_with_input(BenchmarkId::new("k=0", n), &n, |b, &n| {
            b.iter(|| generate_uword(black_box(n), 0).unwrap())
        });
        if n == 7 {
            // Collapsing all 120 cycles takes seconds per iteration.
            continue;
        }
        group.bench_with_input(BenchmarkId::new("k=max", n), &n, |b, &n| {
            let k = (1..=n - 2).product::<usize>();
            b.iter(|| generate_uword(black_box(n), k).unwrap())
        });
    }
    group.finish();
}

fn restricted(c: &mut Criterion) {
    let mut group = c.benchmark_group("construct_restricted");
    for n in 3..=7 {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| construct_restricted(black_box(n), Mode::Increasing).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, uwords, restricted);
criterion_main!(benches);
