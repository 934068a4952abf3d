//! Seed derivation for reproducible randomized runs.
//!
//! Every randomized entry point takes a caller-supplied generator. Runners that
//! split work into independent trials derive one seed per trial from a single
//! 64-bit master seed: trial `i` uses the first output of a ChaCha8 stream
//! seeded with the master seed and positioned on stream `i`. The derivation
//! depends only on `(master, i)`, so serial and parallel runs agree.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed of the `index`-th independent task under `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng.next_u64()
}

pub fn derived(master: u64, index: u64) -> SeededRng {
    seeded(derive_seed(master, index))
}
