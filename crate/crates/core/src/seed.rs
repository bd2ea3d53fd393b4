//! Seed derivation for reproducible Monte Carlo runs.
//!
//! Every random draw goes through [`ChaCha20Rng`], a counter-based generator
//! with 2^64 independent streams per seed. Channels are drawn from stream 0 of
//! a seed and random precoders from streams starting at
//! [`PRECODER_STREAM`], so one per-trial seed can drive both without overlap.
//!
//! Per-trial seeds come from [`trial_seed`], SplitMix64 finalizers applied to
//! the base seed, the SNR-point index and the trial index. The result depends
//! only on `(base, snr_index, trial)`, never on the order trials are
//! scheduled in.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub const CHANNEL_STREAM: u64 = 0;
pub const PRECODER_STREAM: u64 = 1 << 32;

/// SplitMix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of Monte Carlo trial `trial` at SNR point `snr_index` under base
/// seed `base`:
/// `splitmix64(splitmix64(splitmix64(base) ^ snr_index) ^ trial)`.
pub fn trial_seed(base: u64, snr_index: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(base) ^ snr_index) ^ trial)
}

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
