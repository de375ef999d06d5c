//! Seed splitting.
//!
//! Every replication owns an independent generator whose seed depends only on
//! `(master seed, scenario index, replication index)`:
//!
//! ```text
//! replication_seed = mix(mix(mix(master) ^ scenario) ^ replication)
//! stream_seed      = mix(replication_seed ^ (stream + 1) * 0x9E3779B97F4A7C15)
//! ```
//!
//! where `mix` is the SplitMix64 finaliser. Each stream seed initialises a ChaCha8 generator.
//! Results therefore do not depend on execution order or thread count, and growing the grid
//! or the replication count leaves existing replications unchanged.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function applied to `x + golden gamma`.
pub fn mix(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn replication_seed(master: u64, scenario: u64, replication: u64) -> u64 {
    mix(mix(mix(master) ^ scenario) ^ replication)
}

/// Independent random streams used within one replication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Cohort = 0,
    Linkage = 1,
}

pub fn stream_seed(replication_seed: u64, stream: Stream) -> u64 {
    mix(replication_seed ^ (stream as u64 + 1).wrapping_mul(GOLDEN_GAMMA))
}

pub fn stream_rng(replication_seed: u64, stream: Stream) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(replication_seed, stream))
}
