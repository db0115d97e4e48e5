//! Deterministic seed plumbing.
//!
//! Every random draw in the crate comes from a [`ChaCha8Rng`] seeded either
//! directly by the caller or through [`derive_seed`]. Independent work items
//! (instances, restarts, repeated runs) get their own derived seed so that
//! results do not depend on scheduling or iteration order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Mixes a master seed with a stream index into an independent child seed.
///
/// Uses the splitmix64 finalizer, which maps distinct inputs to well-spread
/// outputs and is trivially portable.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Builds the crate's standard generator from a seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
