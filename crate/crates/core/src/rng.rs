//! Independent random streams derived from one master seed.
//!
//! The environment (placement, walk, fading, rectifier draw) consumes its own
//! stream each, so changing the selector or allocator never perturbs it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Placement = 1,
    Mobility = 2,
    Fading = 3,
    Rectifier = 4,
}

pub fn stream(seed: u64, which: Stream) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(which as u64);
    rng
}
