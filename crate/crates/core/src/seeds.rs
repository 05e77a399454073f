//! Named deterministic random sub-streams.
//!
//! Every source of randomness in the crate draws from a stream derived from
//! a single root seed and a component label, so experiments can vary one
//! component (instance, graph, ...) while holding the others fixed.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Derive the stream seed for `label` under the given root seed.
pub fn stream_seed(seed: u64, label: &str) -> u64 {
    // FNV-1a over the label, mixed with the root seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Deterministic RNG for the named sub-stream.
pub fn stream(seed: u64, label: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(seed, label))
}
