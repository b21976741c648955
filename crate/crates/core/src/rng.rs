//! Counter-based random streams: one seed, independent replica streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for replica `stream` of a run seeded with `seed`.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
