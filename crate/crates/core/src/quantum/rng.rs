use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// A seeded family of independent random streams.
///
/// Stream `i` depends only on the seed and `i`, so shot `i` draws the same
/// numbers no matter which thread runs it or in what order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedStream {
    seed: u64,
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        SeedStream { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn substream(&self, index: u64) -> SimRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// A child family, for nesting (e.g. per-trial input preparation).
    pub fn split(&self, label: u64) -> SeedStream {
        use rand::RngCore;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x9e37_79b9_7f4a_7c15);
        rng.set_stream(label);
        SeedStream { seed: rng.next_u64() }
    }
}
