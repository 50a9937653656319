//! Reproducible random streams.
//!
//! Every stream is a xoshiro256++ generator. A stream is identified by a
//! `(seed, index)` pair and is seeded with `seed_from_u64(seed ^ mix(index))`,
//! where `mix` is the SplitMix64 finalizer applied to `index + 1`; the
//! generator expands that 64-bit value into its 256-bit state with SplitMix64.
//! Index 0 is the stream used for single draws, trial `t` uses index `t + 1`.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

pub type Stream = Xoshiro256PlusPlus;

fn mix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

pub fn stream(seed: u64, index: u64) -> Stream {
    Xoshiro256PlusPlus::seed_from_u64(seed ^ mix(index.wrapping_add(1)))
}

/// Seed for trial `t` of an experiment seeded with `seed`.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    let mut s = stream(seed, trial as u64 + 1);
    s.random()
}

pub(crate) fn uniform(rng: &mut Stream, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}
