use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent substream `stream` of the generator keyed by `seed`.
///
/// Work split into chunks draws chunk `c` from substream `c`, so results do
/// not depend on how chunks are scheduled across threads.
pub(crate) fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
