//! Deterministic seed derivation.
//!
//! Every random draw in a run comes from a ChaCha8 stream whose 256-bit seed
//! is expanded from a `u64` with SplitMix64. Per-node streams are keyed by
//! `(master_seed, node id)` rather than by arrival order, so adding or
//! removing one node never perturbs the draws of any other node.

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

/// SplitMix64 step: advances the state and returns the next output word.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Expands a 64-bit seed into a full ChaCha seed.
fn expand(seed: u64) -> [u8; 32] {
    let mut state = seed;
    let mut out = [0u8; 32];
    for chunk in out.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    out
}

/// Stream for a top-level purpose (schedule coins, id draws, topology, ...).
///
/// Distinct labels yield independent streams from the same `u64` seed.
pub fn labeled_stream(seed: u64, label: &str) -> ChaCha8Rng {
    let mut h = seed;
    for b in label.bytes() {
        h = splitmix64(&mut h) ^ u64::from(b);
    }
    ChaCha8Rng::from_seed(expand(splitmix64(&mut h)))
}

/// Private stream of one node, keyed by `(master_seed, id)`.
pub fn node_stream(master_seed: u64, node_id: u64) -> ChaCha8Rng {
    let mut h = master_seed ^ node_id.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    let _ = splitmix64(&mut h);
    ChaCha8Rng::from_seed(expand(h))
}
