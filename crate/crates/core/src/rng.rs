//! Reproducible random streams.
//!
//! Every Monte Carlo trial draws from its own ChaCha8 stream: the key is
//! derived from the master seed and the stream number is the trial index,
//! so trials can run in any order (or in parallel) and still produce the
//! same samples.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TrialRng = ChaCha8Rng;

/// Stream for trial `index` under `master_seed`.
pub fn substream(master_seed: u64, index: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Stream used when a single trajectory is requested by seed alone.
pub fn single(seed: u64) -> TrialRng {
    substream(seed, 0)
}

/// Hands out 2-bit lattice directions, 32 per 64-bit draw.
pub struct DirectionSource<R> {
    rng: R,
    buffer: u64,
    remaining: u32,
}

impl<R: RngCore> DirectionSource<R> {
    pub fn new(rng: R) -> Self {
        Self {
            rng,
            buffer: 0,
            remaining: 0,
        }
    }

    /// Uniform value in 0..4.
    #[inline]
    pub fn next_direction(&mut self) -> u8 {
        if self.remaining == 0 {
            self.buffer = self.rng.next_u64();
            self.remaining = 32;
        }
        let d = (self.buffer & 3) as u8;
        self.buffer >>= 2;
        self.remaining -= 1;
        d
    }

    /// Uniform bit.
    #[inline]
    pub fn next_bit(&mut self) -> bool {
        self.next_direction() & 1 == 1
    }
}
