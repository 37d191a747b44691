//! Synthetic data generators shared by the benchmark targets.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use stenet_core::PairGrid;

/// Standard normal draws.
pub fn noise(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

/// Geometric random walk with 1% daily volatility starting at 100.
pub fn random_walk_prices(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log_price = 0.0f64;
    (0..n)
        .map(|_| {
            let step: f64 = StandardNormal.sample(&mut rng);
            log_price += 0.01 * step;
            100.0 * log_price.exp()
        })
        .collect()
}

/// A fully aligned pair grid of independent price walks.
pub fn aligned_grid(seed: u64, stocks: usize, len: usize) -> PairGrid {
    let series: Vec<Vec<f64>> = (0..stocks)
        .map(|s| random_walk_prices(seed.wrapping_add(s as u64), len))
        .collect();
    let mut grid = PairGrid::new(stocks);
    for i in 0..stocks {
        for j in i + 1..stocks {
            grid.set(i, j, series[i].clone(), series[j].clone());
        }
    }
    grid
}
