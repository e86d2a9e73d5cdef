//! Seeded, named RNG streams.
//!
//! One run owns three independent ChaCha streams derived from the same
//! 64-bit seed: deployment, cluster-head election, and synthetic sensing.
//! Keeping the streams separate means toggling a feature that consumes
//! randomness (e.g. TEEN sensing) cannot perturb the election draws of an
//! otherwise identical run, so protocol-vs-variant comparisons stay paired.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream id for node placement and heterogeneity assignment.
pub const STREAM_DEPLOY: u64 = 1;
/// Stream id for cluster-head election draws.
pub const STREAM_ELECTION: u64 = 2;
/// Stream id for synthetic sensed values (TEEN gating).
pub const STREAM_SENSING: u64 = 3;

/// Builds the ChaCha stream `stream` for the run seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
