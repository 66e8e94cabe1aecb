//! Seed splitting.
//!
//! Every random draw in the crate comes from a ChaCha8 generator seeded with a
//! child seed. Children are derived as
//!
//! ```text
//! child(parent, index) = splitmix64(parent ^ splitmix64(index + 0x9E3779B97F4A7C15))
//! ```
//!
//! so a task's randomness depends only on its position in the task tree, never
//! on which thread runs it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// The splitmix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of child `index` from `parent`.
pub fn child(parent: u64, index: u64) -> u64 {
    splitmix64(parent ^ splitmix64(index.wrapping_add(GOLDEN)))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
