//! Seeded random streams.
//!
//! Every random consumer in the crate draws from a ChaCha20 generator keyed by
//! a `(seed, stream)` pair, so parallel workers get independent sequences that
//! depend only on their index.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type StreamRng = ChaCha20Rng;

/// Generator for stream `stream` of master seed `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
