//! Seeded random sources. Every sampling operation takes one explicitly.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `counter` under a master seed. Used to give every Monte
/// Carlo trial its own generator so results do not depend on scheduling.
pub fn stream(seed: u64, counter: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(counter);
    rng
}
