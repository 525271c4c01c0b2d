//! Seeded, reproducible random stream.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// ChaCha-backed generator. Identical seeds (and stream indices) produce
/// identical sequences on every platform.
#[derive(Clone, Debug)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha12Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource {
            seed,
            rng: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream `index` under the same seed; used to give every
    /// trajectory of a batch its own generator.
    pub fn for_stream(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(index);
        RandomSource { seed, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl RngCore for RandomSource {
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
