//! Deterministic, splittable random number streams.
//!
//! Streams are ChaCha12 generators keyed by a 64-bit seed, with the ChaCha
//! stream counter selecting independent substreams. Gaussian variates are
//! drawn by the inverse-CDF method and consume exactly one 64-bit word from
//! the stream per sample, so stream consumption is fixed and reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use super::inverse_normal_cdf;

/// Identifies a reproducible random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seed {
    pub seed: u64,
    pub stream_id: u64,
}

impl Seed {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Seed { seed, stream_id }
    }

    /// Substream for path `index`, stable under changes to the total path
    /// count.
    pub fn for_path(&self, index: u64) -> Seed {
        Seed {
            seed: self.seed,
            stream_id: (self.stream_id << 32) ^ index,
        }
    }
}

impl Default for Seed {
    fn default() -> Self {
        Seed { seed: 0, stream_id: 0 }
    }
}

/// Generator for the given stream. Identical seeds produce bit-identical
/// output.
pub fn stream_rng(seed: Seed) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed.seed);
    rng.set_stream(seed.stream_id);
    rng
}

/// Uniform draw on the open interval (0, 1); consumes one u64.
pub fn uniform_open01(rng: &mut ChaCha12Rng) -> f64 {
    let bits: u64 = rng.gen();
    ((bits >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal draw by inverse CDF; consumes one u64.
pub fn standard_normal(rng: &mut ChaCha12Rng) -> f64 {
    inverse_normal_cdf(uniform_open01(rng))
}
