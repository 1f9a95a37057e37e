use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use linecollect::oracles::ssp_dense;
use linecollect::{solve, PointSet, SolverConfig};
use linecollect_bench::random_instance;
use std::hint::black_box;

fn solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    group.sample_size(10);
    for k in [2, 3] {
        for n in [1 << 10, 1 << 11, 1 << 12] {
            let inst = random_instance(1, n, k);
            group.bench_with_input(BenchmarkId::new(format!("k{k}"), n), &inst, |b, inst| {
                b.iter(|| {
                    solve(black_box(inst), SolverConfig::default())
                        .unwrap()
                        .weight
                })
            });
        }
    }
    group.finish();
}

fn baseline(c: &mut Criterion) {
    let mut group = c.benchmark_group("ssp_dense");
    group.sample_size(10);
    for n in [1 << 10, 1 << 11, 1 << 12] {
        let points = PointSet::from_instance(&random_instance(1, n, 2)).unwrap();
        group.bench_with_input(BenchmarkId::new("k2", n), &points, |b, pts| {
            b.iter(|| ssp_dense(black_box(pts), 2))
        });
    }
    group.finish();
}

criterion_group!(benches, solver, baseline);
criterion_main!(benches);
