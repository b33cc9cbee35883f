//! Deterministic stream derivation.
//!
//! Every randomized routine takes a caller-supplied seed and derives
//! independent substreams from it by hashing the seed together with a small
//! tag path (replicate index, hypothesis index, ...). Substreams are
//! ChaCha8 generators, so identical seeds give byte-identical results on
//! every platform and across crate versions — `StdRng` makes no such
//! promise.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Top-level tag for the bootstrap stream of one candidate grouping.
pub(crate) const STREAM_HYPOTHESIS: u64 = 1;
/// Top-level tag for simulated observation noise.
pub(crate) const STREAM_NOISE: u64 = 2;
/// Top-level tag for the inference pass inside a simulation replicate.
pub(crate) const STREAM_INFERENCE: u64 = 3;

/// One step of the splitmix64 sequence; a cheap, well-mixed 64-bit hash.
fn splitmix64(state: &mut u64) {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    *state = z ^ (z >> 31);
}

/// Hashes `seed` and `tags` into a single 64-bit stream seed.
pub fn derive_seed(seed: u64, tags: &[u64]) -> u64 {
    let mut state = seed;
    splitmix64(&mut state);
    for &tag in tags {
        state ^= tag;
        splitmix64(&mut state);
    }
    state
}

/// Builds an independent generator for the substream identified by `tags`.
pub fn derive_rng(seed: u64, tags: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, tags))
}
