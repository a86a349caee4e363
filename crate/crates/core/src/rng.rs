//! Deterministic random streams.
//!
//! Every stream is a ChaCha8 generator (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`. ChaCha output is specified independently of the host, so
//! a given seed yields the same draws on every platform.
//!
//! Draws are derived from raw 64-bit outputs so that tests can replay them:
//!
//! * [`RngStream::uniform`]: `(next_u64() >> 11) * 2^-53`, which lies in `[0, 1)`.
//! * [`RngStream::index`]: `floor(uniform() * n)`, clamped to `n - 1`.
//!
//! The optimizer and the objective noise (classical F7) use separate ChaCha
//! streams of the same seed: stream 0 for the optimizer and stream 1 for
//! noise.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const OPTIMIZER_STREAM: u64 = 0;
const NOISE_STREAM: u64 = 1;

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    /// Optimizer stream for `seed`.
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, OPTIMIZER_STREAM)
    }

    /// Noise stream for `seed`, independent of the optimizer stream.
    pub fn noise(seed: u64) -> Self {
        Self::with_stream(seed, NOISE_STREAM)
    }

    fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { seed, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform draw on `[0, 1)` with 53 bits of precision.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw on `[low, high)`.
    pub fn uniform_in(&mut self, low: f64, high: f64) -> f64 {
        low + (high - low) * self.uniform()
    }

    /// Uniform index in `0..n`. `n` must be positive.
    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.uniform() * n as f64) as usize).min(n - 1)
    }
}
