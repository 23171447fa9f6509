//! Deterministic, splittable random streams.
//!
//! A `RandomStream` is a `(seed, stream_index)` pair mapped onto ChaCha8's
//! independent stream mechanism: equal pairs always reproduce the same
//! sequence, distinct pairs give statistically independent sequences.
//! Monte Carlo replication assigns one sub-stream per replicate, so results
//! are identical no matter how the replicates are scheduled across threads.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RandomStream {
    pub seed: u64,
    pub stream_index: u64,
}

impl RandomStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        Self { seed, stream_index }
    }

    /// Instantiate the generator for this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_index);
        rng
    }

    /// The stream `offset` slots after this one (same seed). Callers that
    /// fan out (suites, estimators) reserve disjoint index blocks.
    pub fn substream(&self, offset: u64) -> Self {
        Self { seed: self.seed, stream_index: self.stream_index.wrapping_add(offset) }
    }
}
