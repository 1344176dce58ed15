//! Seeded impartial-culture profiles.
//!
//! The stream is ChaCha8 keyed by SplitMix64 expansion of the seed; each
//! ballot is a Fisher-Yates shuffle of `1..=m` drawing indices by rejection
//! sampling on 32-bit outputs. Every step is spelled out here so the same
//! `(m, n, seed)` yields the same profile on every platform and release of
//! the dependencies.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::profile::Profile;

/// Identifies the generation procedure above; bump when it changes.
pub const GENERATOR_VERSION: &str = "ic-chacha8-fy-v1";

pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a master seed with a path of integers (cell coordinates, trial
/// index) into an independent seed.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    let mut state = master;
    let mut out = splitmix64(&mut state);
    for &part in path {
        state ^= part.wrapping_mul(0xD6E8_FEB8_6659_FD93);
        out = splitmix64(&mut state);
    }
    out
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    let mut state = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Uniform integer in `0..bound`.
fn uniform_below(rng: &mut impl RngCore, bound: u32) -> u32 {
    debug_assert!(bound > 0);
    let bound = bound as u64;
    let zone = (1u64 << 32) - (1u64 << 32) % bound;
    loop {
        let x = rng.next_u32() as u64;
        if x < zone {
            return (x % bound) as u32;
        }
    }
}

pub fn generate_impartial_culture(m: usize, n: usize, seed: u64) -> Result<Profile> {
    if m < 1 {
        return Err(Error::NoCandidates);
    }
    if n < 1 {
        return Err(Error::NoVoters);
    }
    if m > u32::MAX as usize {
        return Err(Error::Config(format!("candidate count {m} too large")));
    }
    let mut rng = rng_for(seed);
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let mut row: Vec<usize> = (1..=m).collect();
        for i in (1..m).rev() {
            let j = uniform_below(&mut rng, i as u32 + 1) as usize;
            row.swap(i, j);
        }
        rows.push(row);
    }
    Profile::new(&rows, m)
}
