//! Reproducible stream derivation for parallel sampling.
//!
//! Every random draw in the crate comes from a ChaCha8 stream keyed by the
//! run seed plus a small tuple of tags (operation id, sweep index, patch
//! index, ...). Streams are independent of thread count and scheduling, so
//! a run is bit-reproducible for a fixed seed.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Operation tags used to separate streams within one run.
pub mod tag {
    pub const INIT: u64 = 1;
    pub const DICT: u64 = 2;
    pub const CODES: u64 = 3;
    pub const NOISE_PRECISION: u64 = 4;
    pub const WEIGHT_PRECISIONS: u64 = 5;
    pub const PI: u64 = 6;
    pub const MASK: u64 = 7;
    pub const IMAGE_NOISE: u64 = 8;
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive an independent ChaCha8 stream from a seed and a tag tuple.
///
/// The seed and each tag are absorbed through a SplitMix64 chain and the
/// resulting state is squeezed into the 256-bit ChaCha key.
pub fn derive_rng(seed: u64, tags: &[u64]) -> ChaCha8Rng {
    let mut state = seed ^ 0x6A09_E667_F3BC_C908;
    let _ = splitmix64(&mut state);
    for &t in tags {
        state ^= t.wrapping_mul(0xD6E8_FEB8_6659_FD93);
        let _ = splitmix64(&mut state);
    }
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}
