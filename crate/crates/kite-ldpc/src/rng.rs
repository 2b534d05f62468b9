//! Seedable, splittable random streams.
//!
//! Everything random in this crate is derived from a single 64-bit master
//! seed through `ChaCha12Rng`. The generator's 64-bit stream counter splits
//! one seed into independent streams without overlap, so construction,
//! per-frame data, and per-frame noise never share draws.
//!
//! Stream layout (documented so builds are reproducible across runs):
//! - stream 0: H_v Bernoulli entries, consumed block by block for
//!   ell = 19 down to 1, row-major within a block;
//! - stream 1: H_w extra sub-diagonal entries, consumed in ascending
//!   column order t = 0, 1, ...;
//! - streams from [`frame_stream`]: Monte Carlo frames, two per frame
//!   (data then noise), keyed by a caller-chosen lane and frame index.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

pub const HV_STREAM: u64 = 0;
pub const HW_STREAM: u64 = 1;

/// A `ChaCha12Rng` keyed by `seed` on the given stream.
pub fn stream(seed: u64, stream_id: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

/// Stream for per-frame randomness. `lane` separates independent uses
/// (e.g. SNR grid points); `role` separates data (0) from noise (1).
pub fn frame_stream(seed: u64, lane: u32, frame: u32, role: u8) -> ChaCha12Rng {
    // Reserve ids below 2^16 for fixed streams; pack lane/frame/role above.
    let id = 0x1_0000 + (((lane as u64) << 33) | ((frame as u64) << 1) | role as u64);
    stream(seed, id)
}
