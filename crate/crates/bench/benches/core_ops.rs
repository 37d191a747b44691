use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stenet_bench::{aligned_grid, noise, random_walk_prices};
use stenet_core::entropy::{pair_transfer_entropy, te_matrix};
use stenet_core::surrogate::phase_randomize;
use stenet_core::symbolic::symbol_sequence;
use stenet_core::AnalysisDomain;

fn bench_symbolize(c: &mut Criterion) {
    let series = noise(1, 500);
    c.bench_function("symbol_sequence_len500_k2_d2", |b| {
        b.iter(|| symbol_sequence(black_box(&series), 2, 2))
    });
    c.bench_function("symbol_sequence_len500_k3_d1", |b| {
        b.iter(|| symbol_sequence(black_box(&series), 3, 1))
    });
}

fn bench_pair_te(c: &mut Criterion) {
    let x = noise(2, 500);
    let y = noise(3, 500);
    c.bench_function("pair_transfer_entropy_len500_k2_d2", |b| {
        b.iter(|| pair_transfer_entropy(black_box(&x), black_box(&y), 2, 2).unwrap())
    });
}

fn bench_phase_randomize(c: &mut Criterion) {
    let prices = random_walk_prices(4, 500);
    c.bench_function("phase_randomize_len500", |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        b.iter(|| phase_randomize(black_box(&prices), &mut rng).unwrap())
    });
    let odd = random_walk_prices(5, 499);
    c.bench_function("phase_randomize_len499_odd", |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        b.iter(|| phase_randomize(black_box(&odd), &mut rng).unwrap())
    });
}

fn bench_te_matrix(c: &mut Criterion) {
    let grid = aligned_grid(6, 20, 500);
    c.bench_function("te_matrix_20stocks_len500_k2_d2", |b| {
        b.iter(|| te_matrix(black_box(&grid), 2, 2, AnalysisDomain::Returns, 0))
    });
}

criterion_group!(
    benches,
    bench_symbolize,
    bench_pair_te,
    bench_phase_randomize,
    bench_te_matrix
);
criterion_main!(benches);
