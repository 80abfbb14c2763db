//! Random number generation.
//!
//! Every stochastic choice in the crate draws from [`StreamRng`], which is
//! ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded through `seed_from_u64`.
//! ChaCha is counter-based, so streams are reproducible bit-for-bit across
//! platforms. Independent sub-streams are obtained by mixing a parent seed
//! with an index through [`derive_seed`] (a SplitMix64 finalizer) instead of
//! sharing one generator, which keeps interleaved consumers in sync.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Build the generator for a 64-bit seed.
pub fn rng_from_seed(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the seed of child stream `index` from `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03))
}
