//! Deterministic seed derivation.
//!
//! Every stochastic routine takes an explicit 64-bit seed. Sub-streams are
//! derived with the SplitMix64 finalizer applied to `seed ^ golden * (k + 1)`,
//! which is portable and decorrelates adjacent indices.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sub-seed `k` of `seed`.
pub fn mix(seed: u64, k: u64) -> u64 {
    splitmix64(seed ^ GOLDEN.wrapping_mul(k.wrapping_add(1)))
}

/// Sub-seed addressed by a path of indices, e.g. `(generation, slot)`.
pub fn mix_path(seed: u64, path: &[u64]) -> u64 {
    path.iter().fold(seed, |s, &k| mix(s, k))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // First outputs of the reference SplitMix64 generator seeded with 0.
        let mut state = 0u64;
        let mut next = || {
            let out = splitmix64(state);
            state = state.wrapping_add(GOLDEN);
            out
        };
        assert_eq!(next(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(next(), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn adjacent_indices_differ() {
        let seeds: Vec<u64> = (0..1000).map(|k| mix(7, k)).collect();
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), seeds.len());
        assert_ne!(mix(7, 0), mix(8, 0));
    }
}
