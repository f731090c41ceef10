//! Counter-based seed derivation.
//!
//! A single master seed expands into independent per-purpose, per-replica
//! seeds through a SplitMix64 finalizer applied to the triple
//! `(master, stream, counter)`. The derivation is pure arithmetic, so
//! replicas can be executed in any order (or in parallel) and still see
//! exactly the same random numbers.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Logical stream identifiers, kept distinct so that e.g. event sampling
/// and initial-data sampling never share a generator.
pub mod streams {
    pub const EVENTS: u64 = 1;
    pub const INITIAL_FIELD: u64 = 2;
    pub const VERIFY: u64 = 3;
    pub const SWEEP_BASE: u64 = 0x100;
}

fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the seed for (`stream`, `counter`) from the master seed.
pub fn derive_seed(master: u64, stream: u64, counter: u64) -> u64 {
    let a = splitmix64(master ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    splitmix64(a ^ counter.wrapping_mul(0xBF58_476D_1CE4_E5B9))
}

/// A ChaCha8 generator seeded from the derived `(master, stream, counter)` seed.
pub fn rng_for(master: u64, stream: u64, counter: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, stream, counter))
}

/// A ChaCha8 generator seeded directly from a 64-bit seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
