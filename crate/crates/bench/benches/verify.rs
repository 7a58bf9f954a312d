use criterion::{criterion_group, criterion_main, Criterion};
use localinv_bench::dims;
use localinv_core::{span_dimension_rho, verify_generation, MultiDegree};

fn generation(c: &mut Criterion) {
    let d = dims(&[2, 2]);
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    for alpha in ["1,1", "2,1", "3"] {
        let a = MultiDegree::parse(alpha).unwrap();
        group.bench_function(format!("verify_generation {alpha}"), |b| {
            b.iter(|| verify_generation(&a, &d, 1).unwrap())
        });
    }
    group.bench_function("span_dimension_rho (2,3) m=2", |b| {
        b.iter(|| span_dimension_rho(&dims(&[2, 3]), 2).unwrap())
    });
    group.finish();
}

criterion_group!(benches, generation);
criterion_main!(benches);
