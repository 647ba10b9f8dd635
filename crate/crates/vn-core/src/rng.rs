//! Reproducible, splittable random number generation.
//!
//! Every randomized routine takes an [`RngState`] naming a `(seed, stream)`
//! pair. Streams are independent, so trial `t` of a Monte Carlo run can use
//! stream `t` and produce the same draws whether trials run sequentially or
//! across a thread pool.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// A named position in a family of independent random streams.
///
/// Identical `(seed, stream)` pairs yield identical sample sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngState {
    pub seed: u64,
    pub stream: u64,
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        RngState { seed, stream: 0 }
    }

    pub fn with_stream(self, stream: u64) -> Self {
        RngState { seed: self.seed, stream }
    }

    /// Materialize the generator for this state.
    pub fn rng(&self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}
