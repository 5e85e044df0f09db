//! Seeded random streams.
//!
//! A master seed keys a ChaCha8 generator; independent substreams are selected
//! with the ChaCha stream id, so stream `k` never depends on how many other
//! streams were drawn. Trial `k` of an experiment uses stream `k`, pattern draws
//! use streams offset by [`PATTERN_STREAM_BASE`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream ids at and above this value are reserved for sampling-pattern draws.
pub const PATTERN_STREAM_BASE: u64 = 1 << 48;

pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
