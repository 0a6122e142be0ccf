//! Seeded generator streams. Every random decision reads from its own ChaCha8
//! stream so that adding a consumer never shifts the draws of another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) const COLOR: u64 = 1;
pub(crate) const SPLIT: u64 = 2;
pub(crate) const SAMPLE: u64 = 3;
pub(crate) const SOLVER: u64 = 4;
pub(crate) const NORM: u64 = 5;

const SAMPLER_BASE: u64 = 1 << 40;

pub(crate) fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream for one `(order, stratum)` cell of the sampler.
pub(crate) fn sampler_stream(seed: u64, order: usize, stratum: usize) -> ChaCha8Rng {
    stream(
        seed,
        SAMPLER_BASE | ((order as u64) << 20) | stratum as u64,
    )
}
