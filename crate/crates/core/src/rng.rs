//! Seeded randomness.
//!
//! Every random stream in the crate is a ChaCha8 generator seeded from a
//! single `u64` through [`SeedableRng::seed_from_u64`]. Replicate streams
//! are derived from `(base_seed, rep)` with [`derive_seed`], which mixes the
//! pair through two rounds of the SplitMix64 finalizer:
//!
//! ```text
//! derive_seed(base, rep) = splitmix64(splitmix64(base) ^ (rep + 0x9E3779B97F4A7C15))
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type LabRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// The SplitMix64 output function (Steele, Lea and Flood).
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sub-seed for replicate `rep` of an experiment seeded with `base`.
pub fn derive_seed(base: u64, rep: u64) -> u64 {
    splitmix64(splitmix64(base) ^ rep.wrapping_add(GOLDEN_GAMMA))
}

pub fn rng_from_seed(seed: u64) -> LabRng {
    LabRng::seed_from_u64(seed)
}
