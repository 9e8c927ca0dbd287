//! Counter-based draws: every `(seed, trial, arm, t, lane)` key maps to an
//! independent uniform without any generator state.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finaliser.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Chained hash of the key words.
#[inline]
pub fn hash_key(words: &[u64]) -> u64 {
    let mut h = mix64(0x5eed_ba5e_0000_0001);
    for &w in words {
        h = mix64(h ^ w.wrapping_add(GOLDEN));
    }
    h
}

/// Uniform in the open interval `(0, 1)` from the top 52 bits.
#[inline]
pub fn unit_open(bits: u64) -> f64 {
    ((bits >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

/// The uniform for one table entry.
#[inline]
pub fn uniform(seed: u64, trial: u64, arm: u64, t: u64, lane: u64) -> f64 {
    unit_open(hash_key(&[seed, trial, arm, t, lane]))
}

/// Stream for policies that sample (Thompson sampling). All sampling
/// policies in a trial start from the same state.
pub fn policy_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(hash_key(&[seed, trial, u64::MAX]))
}
