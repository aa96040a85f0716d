use std::collections::BTreeMap;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use specrad::dynamics::{Subshift, WindowCocycle, Word};
use specrad::radii::{self, golden_pair};
use specrad::Operator;

fn random_operator(rng: &mut ChaCha8Rng, dim: usize) -> Operator {
    let entries: Vec<f64> = (0..dim * dim)
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    Operator::new(dim, &entries).unwrap()
}

fn random_cocycle(rng: &mut ChaCha8Rng, dim: usize) -> WindowCocycle {
    let mut table = BTreeMap::new();
    table.insert(vec![0u8], random_operator(rng, dim));
    table.insert(vec![1u8], random_operator(rng, dim));
    WindowCocycle::new(Subshift::full(2).unwrap(), 1, dim, 1.0, table).unwrap()
}

fn bench_spectral_primitives(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let op6 = random_operator(&mut rng, 6);

    c.bench_function("singular_values_6x6", |b| {
        b.iter(|| black_box(&op6).singular_values().unwrap())
    });
    c.bench_function("rho_s_6x6_fractional", |b| {
        b.iter(|| black_box(&op6).rho_s(2.5).unwrap())
    });
    c.bench_function("volume_growth_6x6", |b| {
        b.iter(|| black_box(&op6).volume_growth(3.0).unwrap())
    });
}

fn bench_bracket_estimators(c: &mut Criterion) {
    let golden = golden_pair();
    c.bench_function("upper_estimate_golden_depth10", |b| {
        b.iter(|| radii::upper_estimate(black_box(&golden), 1.0, 10).unwrap())
    });
    c.bench_function("lower_estimate_golden_period8", |b| {
        b.iter(|| radii::lower_estimate(black_box(&golden), 1.0, 8).unwrap())
    });

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let dense = random_cocycle(&mut rng, 3);
    c.bench_function("bracket_dense3_depth8_period6", |b| {
        b.iter(|| radii::bracket(black_box(&dense), 1.5, 8, 6).unwrap())
    });
}

fn bench_trajectory_averages(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = random_cocycle(&mut rng, 3);
    let symbols: Vec<u8> = (0..256).map(|_| rng.random_range(0..2u8)).collect();
    let word = Word::new(a.subshift(), symbols).unwrap();
    c.bench_function("kingman_256_steps", |b| {
        b.iter(|| radii::kingman_estimate(black_box(&a), &word, 2.0, &[64, 128, 256]).unwrap())
    });
}

criterion_group!(
    benches,
    bench_spectral_primitives,
    bench_bracket_estimators,
    bench_trajectory_averages
);
criterion_main!(benches);
