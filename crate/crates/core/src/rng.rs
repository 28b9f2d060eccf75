//! Seeded random streams with deterministic splitting.
//!
//! A [`RandomStream`] is owned by exactly one consumer. Parallel work never
//! shares a stream; it derives children with [`RandomStream::split`], whose
//! state depends only on the parent seed and the label, never on how many
//! numbers the parent has already produced.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug)]
pub struct RandomStream {
    seed: u64,
    rng: ChaCha8Rng,
}

// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw from `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.random()
    }

    /// Child stream for `label`. Identical `(seed, label)` pairs always give
    /// identical children; the parent's position is irrelevant.
    pub fn split(&self, label: u64) -> RandomStream {
        RandomStream::new(mix(self.seed ^ mix(label.wrapping_add(0x5851_f42d_4c95_7f2d))))
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}
