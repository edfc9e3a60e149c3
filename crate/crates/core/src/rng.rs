use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic generator used by every seeded sampler in the crate.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream from a base seed and a label.
pub fn derived(seed: u64, label: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ label.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}
