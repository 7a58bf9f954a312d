use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use localinv_bench::{dims, long_cycle_monomial};
use localinv_core::{evaluate, evaluate_planned, plan_contraction, random_endotuple};

fn naive_vs_planned(c: &mut Criterion) {
    let d = dims(&[2, 2]);
    let mut group = c.benchmark_group("evaluate");
    for k in [2, 3, 4] {
        let t = long_cycle_monomial(k);
        let x = random_endotuple(&d, 2, 1);
        group.bench_with_input(BenchmarkId::new("naive", k), &k, |b, _| {
            b.iter(|| evaluate(black_box(&t), black_box(&x)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("planned", k), &k, |b, _| {
            b.iter(|| evaluate_planned(black_box(&t), black_box(&x)).unwrap())
        });
    }
    group.finish();
}

fn planning(c: &mut Criterion) {
    let d = dims(&[2, 3]);
    let t = long_cycle_monomial(6);
    c.bench_function("plan_contraction k=6", |b| {
        b.iter(|| plan_contraction(black_box(&t), black_box(&d), None).unwrap())
    });
}

criterion_group!(benches, naive_vs_planned, planning);
criterion_main!(benches);
