//! Fixtures shared by the criterion benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `len` values uniform in `[-1, 1]` from a fixed seed.
pub fn uniform(seed: u64, len: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

pub fn uniform_f32(seed: u64, len: usize) -> Vec<f32> {
    uniform(seed, len).into_iter().map(|v| v as f32).collect()
}
