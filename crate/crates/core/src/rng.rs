//! Seeded, splittable random streams.
//!
//! Every consumer derives its own ChaCha stream from `(seed, stream id)`,
//! so outputs never depend on evaluation order or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Stream ids, one per consumer.
pub mod streams {
    pub const NOISE: u64 = 1;
    pub const MIC_NOISE: u64 = 2;
    pub const SPEECH: u64 = 3;
    pub const WORD_LEVELS: u64 = 4;
    pub const TRAJECTORY: u64 = 5;
}

/// Generator for `(seed, stream)`; `sub` further splits a stream (e.g. per mic).
pub fn stream(seed: u64, stream: u64, sub: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ sub);
    rng
}
