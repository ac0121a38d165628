use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pseudogap_core::exec::MonteCarlo;
use pseudogap_core::model::{dimer_to_ensemble, DimerHoppingModel, PolymerEnsemble, XDist};
use pseudogap_core::pruefer::ids_by_rotation;
use pseudogap_core::spectral::{eigenvalues_with_workers, ids_by_counting, sample_jacobi, EIGEN_TOL};
use pseudogap_core::transfer::compute_critical_data;
use std::hint::black_box;

fn bernoulli() -> PolymerEnsemble {
    let m = DimerHoppingModel::new(1.4, 1.3, 1.0, 0.0, XDist::Bernoulli { p: 2.0 / 3.0 }).unwrap();
    dimer_to_ensemble(&m, None).unwrap()
}

fn workers() -> Vec<(&'static str, usize)> {
    if pseudogap_core::exec::parallel_enabled() {
        vec![("sequential", 1), ("rayon", 0)]
    } else {
        vec![("sequential", 1)]
    }
}

fn bench_counting(c: &mut Criterion) {
    let ens = bernoulli();
    let mut g = c.benchmark_group("ids_by_counting");
    for (name, w) in workers() {
        let mc = MonteCarlo::new(1, 16).with_workers(w);
        g.bench_with_input(BenchmarkId::new(name, 20_000), &mc, |b, mc| {
            b.iter(|| black_box(ids_by_counting(&ens, 0.05, 20_000, mc).unwrap()))
        });
    }
    g.finish();
}

fn bench_rotation(c: &mut Criterion) {
    let ens = bernoulli();
    let cd = compute_critical_data(&ens, 0.0).unwrap();
    let mut g = c.benchmark_group("ids_by_rotation");
    for (name, w) in workers() {
        let mc = MonteCarlo::new(1, 16).with_workers(w);
        g.bench_with_input(BenchmarkId::new(name, 10_000), &mc, |b, mc| {
            b.iter(|| black_box(ids_by_rotation(&ens, &cd, 0.05, 10_000, mc)))
        });
    }
    g.finish();
}

fn bench_spectrum(c: &mut Criterion) {
    let h = sample_jacobi(&bernoulli(), 2000, 1, 0).unwrap();
    let mut g = c.benchmark_group("eigenvalues");
    g.sample_size(10);
    for (name, w) in workers() {
        g.bench_with_input(BenchmarkId::new(name, 2000), &w, |b, &w| {
            b.iter(|| black_box(eigenvalues_with_workers(&h, EIGEN_TOL, w)))
        });
    }
    g.finish();
}

criterion_group!(benches, bench_counting, bench_rotation, bench_spectrum);
criterion_main!(benches);
