use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use dlf_core::decimation::schur_complement;
use dlf_core::{
    assemble_schedule, build_level_graph, eigensolve, fractal_spectrum, level_spectrum,
    uniform_schedule, BoundaryMode, Complex64,
};

fn decimation(c: &mut Criterion) {
    let mut group = c.benchmark_group("level_spectrum");
    for m in [6usize, 8, 10] {
        let sched = uniform_schedule(0.7, 0.24, m).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| {
            b.iter(|| level_spectrum(black_box(&sched), m).unwrap())
        });
    }
    group.finish();

    let sched = uniform_schedule(0.7, 0.24, 11).unwrap();
    c.bench_function("fractal_spectrum/depth11_n32", |b| {
        b.iter(|| fractal_spectrum(black_box(&sched), 32, 11).unwrap())
    });
}

fn dense(c: &mut Criterion) {
    let mut group = c.benchmark_group("eigensolve");
    group.sample_size(10);
    for m in [3usize, 4] {
        let sched = uniform_schedule(0.7, 0.24, m).unwrap();
        let op = assemble_schedule(&build_level_graph(m), &sched, BoundaryMode::Dirichlet).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(m), &op, |b, op| {
            b.iter(|| eigensolve(black_box(op)).unwrap())
        });
    }
    group.finish();

    let sched = uniform_schedule(0.7, 0.24, 4).unwrap();
    let op = assemble_schedule(&build_level_graph(4), &sched, BoundaryMode::Full).unwrap();
    c.bench_function("schur_complement/m4", |b| {
        b.iter(|| schur_complement(black_box(&op), Complex64::new(0.37, 0.0)).unwrap())
    });
}

criterion_group!(benches, decimation, dense);
criterion_main!(benches);
