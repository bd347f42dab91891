//! Deterministic per-trial random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// An RNG for one unit of work, derived from the run seed and a stream id.
/// Results built from these streams do not depend on how work is split
/// across threads.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream id for trial `trial` of sweep point `point`.
pub fn point_stream(point: usize, trial: usize) -> u64 {
    ((point as u64) << 32) | trial as u64
}
