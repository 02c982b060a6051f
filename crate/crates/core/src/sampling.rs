//! Deterministic pseudo-random instances.
//!
//! All exact-arithmetic test data comes from a SplitMix64 stream so that a
//! `(seed, trial)` pair reproduces the same tensor and vectors everywhere.

use rand::{RngCore, SeedableRng};
pub use rand_xoshiro::SplitMix64;

use crate::linalg::Vector;
use crate::scalar::Field;

pub fn rng(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

/// Seed for trial `index` of a campaign started from `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    rng(master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15)).next_u64()
}

/// Uniform draw in `[0, 1)` from the top 53 bits.
pub fn unit_f64<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

pub fn random_vector<F: Field, R: RngCore>(rng: &mut R, dim: usize, bound: u64) -> Vector<F> {
    Vector::new((0..dim).map(|_| F::sample(rng, bound)).collect())
}

pub fn random_vectors<F: Field, R: RngCore>(rng: &mut R, count: usize, dim: usize, bound: u64) -> Vec<Vector<F>> {
    (0..count).map(|_| random_vector(rng, dim, bound)).collect()
}
