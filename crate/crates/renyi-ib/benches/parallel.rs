//! Compares the rayon-parallel entry points against their sequential
//! fallbacks on the two data-parallel hot paths: exhaustive map evaluation
//! and the solver's (β, restart) sweep.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use renyi_ib::solver::{sweep, sweep_seq, SolverConfig};
use renyi_ib::{brute_force_points, brute_force_points_seq, JointDistribution, RenyiOrder};

fn random_joint(seed: u64, ny: usize, nx: usize) -> JointDistribution {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<Vec<f64>> =
        (0..ny).map(|_| (0..nx).map(|_| rng.gen::<f64>() + 0.01).collect()).collect();
    let total: f64 = raw.iter().flatten().sum();
    JointDistribution::from_rows(
        raw.iter().map(|r| r.iter().map(|v| v / total).collect()).collect(),
    )
    .unwrap()
}

fn bench_brute_force(c: &mut Criterion) {
    let order = RenyiOrder::new(0.5).unwrap();
    let mut group = c.benchmark_group("brute_force_points");
    for &(nx, m) in &[(6usize, 4u32), (8, 4), (7, 5)] {
        let j = random_joint(nx as u64, 4, nx);
        let maps = (m as u64).pow(nx as u32);
        group.bench_with_input(BenchmarkId::new("parallel", maps), &j, |b, j| {
            b.iter(|| brute_force_points(j, order, m).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sequential", maps), &j, |b, j| {
            b.iter(|| brute_force_points_seq(j, order, m).unwrap())
        });
    }
    group.finish();
}

fn bench_sweep(c: &mut Criterion) {
    let j = renyi_ib::canonical::table1a().0;
    let config = SolverConfig::new(RenyiOrder::new(0.5).unwrap(), 3);
    let mut group = c.benchmark_group("sweep");
    group.bench_function("parallel", |b| b.iter(|| sweep(&j, &config).unwrap()));
    group.bench_function("sequential", |b| b.iter(|| sweep_seq(&j, &config).unwrap()));
    group.finish();
}

criterion_group!(benches, bench_brute_force, bench_sweep);
criterion_main!(benches);
