//! Deterministic seed derivation.
//!
//! Every stochastic cell of a campaign (run, experiment row, tuning
//! iteration) gets its own stream derived from the master seed and the
//! cell coordinates, so results never depend on worker scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The random stream used throughout the crate.
pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mix a base seed with a path of coordinates into a new seed.
pub fn derive(base: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(base), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}
