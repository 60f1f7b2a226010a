use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dsu11::interferometer::{evolve_full, fock_probe_moments, gaussian_probe_moments};
use dsu11::sweep::{figure_preset, run_sweep};
use dsu11::{homodyne, metrology, Backend};
use dsu11_bench::unit_point;
use std::hint::black_box;

fn closed_forms(c: &mut Criterion) {
    let cfg = unit_point(1.0);
    c.bench_function("qfi_ideal", |b| b.iter(|| metrology::qfi_ideal(black_box(&cfg))));
    c.bench_function("phase_sensitivity_lossy", |b| {
        b.iter(|| homodyne::phase_sensitivity_lossy(black_box(&cfg), 0.8))
    });
}

fn gaussian_engine(c: &mut Criterion) {
    let cfg = unit_point(1.0).with_phi(0.2);
    c.bench_function("gaussian_probe_moments", |b| b.iter(|| gaussian_probe_moments(black_box(&cfg))));
    c.bench_function("evolve_full_lossy", |b| b.iter(|| evolve_full(black_box(&cfg), Some(0.8), Backend::Gaussian)));
}

fn fock_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("fock_probe_moments");
    group.sample_size(10);
    let cfg = unit_point(1.0);
    for cutoff in [64, 128, 256] {
        group.bench_with_input(BenchmarkId::from_parameter(cutoff), &cutoff, |b, &d| {
            b.iter(|| fock_probe_moments(black_box(&cfg), d))
        });
    }
    group.finish();
}

fn figure_sweep(c: &mut Criterion) {
    let spec = figure_preset("8").unwrap();
    c.bench_function("figure_8_sweep", |b| b.iter(|| run_sweep(black_box(&spec))));
}

criterion_group!(benches, closed_forms, gaussian_engine, fock_oracle, figure_sweep);
criterion_main!(benches);
