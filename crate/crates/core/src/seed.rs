//! Seed derivation and the crate-wide random number generator.
//!
//! Trial `i` of a run with base seed `b` always uses `derive(b, i)`, so a run
//! split across workers draws exactly the same numbers as a serial one.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// One round of the SplitMix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for trial `index` of a run with base seed `base`.
pub fn derive(base: u64, index: u64) -> u64 {
    splitmix64(base ^ splitmix64(index ^ 0x5851_F42D_4C95_7F2D))
}

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn derived_seeds_are_distinct() {
        let mut v: alloc::vec::Vec<u64> = (0..10_000).map(|i| derive(7, i)).collect();
        v.sort_unstable();
        v.dedup();
        assert_eq!(v.len(), 10_000);
    }

    #[test]
    fn rng_is_deterministic() {
        let a: alloc::vec::Vec<u64> = { let mut r = rng(3); (0..8).map(|_| r.next_u64()).collect() };
        let b: alloc::vec::Vec<u64> = { let mut r = rng(3); (0..8).map(|_| r.next_u64()).collect() };
        assert_eq!(a, b);
    }
}
