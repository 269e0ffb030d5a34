//! Deterministic random stream used by every stochastic component.
//!
//! The generator is pinned to ChaCha8: a given seed produces the same draw
//! sequence on every platform and build, which is what makes traces and
//! reports byte-reproducible. Uniform doubles take the top 53 bits of one
//! 64-bit output scaled by 2^-53, so draws are reproducible as bit patterns,
//! not merely statistically equivalent.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct RngStream {
    rng: ChaCha8Rng,
    seed: u64,
    draws: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream {
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
            draws: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of uniform draws consumed so far.
    pub fn draws(&self) -> u64 {
        self.draws
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.draws += 1;
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on [lo, hi).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// amp·(2U−1): uniform on [−amp, +amp). One draw.
    pub fn symmetric(&mut self, amp: f64) -> f64 {
        amp * (2.0 * self.uniform() - 1.0)
    }

    /// Fisher–Yates shuffle driven by this stream; consumes len−1 draws.
    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = (self.uniform() * (i + 1) as f64) as usize;
            xs.swap(i, j.min(i));
        }
    }
}

/// Stable per-run seed derivation: FNV-1a over the label, mixed with the
/// master seed and trial index through a SplitMix64 finalizer. Distinct
/// (trial, label) pairs get decorrelated streams; the mapping is part of the
/// reproducibility contract and must not change.
pub fn derive_seed(master: u64, trial: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in label.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x100000001b3);
    }
    let mut z = master ^ h.rotate_left(17) ^ trial.wrapping_mul(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}
