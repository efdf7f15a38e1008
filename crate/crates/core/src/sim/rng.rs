//! Deterministic per-replicate random number streams.
//!
//! Every replicate gets its own generator derived from (seed, replicate
//! index), so results are bit-identical whether replicates run serially or
//! across any number of worker threads, in any order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One step of the splitmix64 sequence; a fast, well-mixed 64-bit hash.
fn splitmix64(state: &mut u64) {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    *state = z ^ (z >> 31);
}

/// An independent generator for replicate `index` of a run keyed by `seed`.
///
/// The 256-bit ChaCha key is expanded from a splitmix64 walk over the
/// (seed, index) pair, so neighboring indices share no key structure.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut state = seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(1);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        splitmix64(&mut state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}
