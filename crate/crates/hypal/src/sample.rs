//! Deterministic pseudorandom samples for property checks.
//!
//! Every sampler is seeded explicitly (the CLI wires the seed to the
//! `HYPAL_SEED` environment variable, default 0) and runs on ChaCha8, so
//! a sample is reproducible across platforms and runs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{FunctionOnH, Measure};
use crate::rational::{rat, Rational};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Strictly positive rational functions with small numerators and
/// denominators.
pub fn random_positive_functions(n: usize, count: usize, seed: u64) -> Vec<FunctionOnH> {
    let mut rng = seeded_rng(seed);
    (0..count)
        .map(|_| {
            FunctionOnH::new(
                (0..n)
                    .map(|_| rat(rng.random_range(1..=9), rng.random_range(1..=4)))
                    .collect(),
            )
        })
        .collect()
}

/// Signed rational measures, for bilinearity and norm properties.
pub fn random_signed_measures(n: usize, count: usize, seed: u64) -> Vec<Measure> {
    let mut rng = seeded_rng(seed);
    (0..count)
        .map(|_| {
            Measure::new(
                (0..n)
                    .map(|_| rat(rng.random_range(-9..=9), rng.random_range(1..=4)))
                    .collect(),
            )
        })
        .collect()
}

/// Random exact convex weights: nonnegative rationals summing to 1.
pub fn random_convex_weights(rng: &mut ChaCha8Rng, k: usize) -> Vec<Rational> {
    loop {
        let numerators: Vec<i64> = (0..k).map(|_| rng.random_range(0..=9)).collect();
        let total: i64 = numerators.iter().sum();
        if total > 0 {
            return numerators.into_iter().map(|p| rat(p, total)).collect();
        }
    }
}

/// Random exact points of the probability simplex on `n` elements.
pub fn random_simplex_points(n: usize, count: usize, seed: u64) -> Vec<Measure> {
    let mut rng = seeded_rng(seed);
    (0..count)
        .map(|_| Measure::new(random_convex_weights(&mut rng, n)))
        .collect()
}
