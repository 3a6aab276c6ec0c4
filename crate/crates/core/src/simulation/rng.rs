//! Per-replicate random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a stream is used for; keeps draws for different quantities
/// independent of each other and of the draw count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamPurpose {
    Treatment,
    MediatorError,
    OutcomeError,
}

impl StreamPurpose {
    fn tag(self) -> u64 {
        match self {
            StreamPurpose::Treatment => 1,
            StreamPurpose::MediatorError => 2,
            StreamPurpose::OutcomeError => 3,
        }
    }
}

/// Deterministic generator for `(seed, purpose, replicate)`.
pub fn stream_rng(seed: u64, purpose: StreamPurpose, replicate: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&purpose.tag().to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(replicate);
    rng
}
