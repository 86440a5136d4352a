//! Seed handling.
//!
//! Every stochastic routine in this crate draws from `ChaCha8Rng`
//! (`rand_chacha` 0.9), seeded through [`rng_from_seed`]. Child seeds are
//! derived with [`split`], a SplitMix64 finaliser applied to
//! `base + (stream + 1) * 0x9E3779B97F4A7C15`. Replication `r` of an experiment
//! uses `split(base_seed, r)`; sub-streams inside a replication use
//! `split(replication_seed, k)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of child stream `stream` from `base`.
pub fn split(base: u64, stream: u64) -> u64 {
    mix64(base.wrapping_add(stream.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
