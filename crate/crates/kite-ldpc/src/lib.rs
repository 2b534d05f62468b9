//! Rate-compatible rateless LDPC toolkit.
//!
//! The code family is systematic: a length-k information word is extended
//! with up to 19k parity bits, and every prefix of the mother codeword is
//! itself a decodable code, so one encoding serves every rate in
//! [0.05, 1.0). Parity checks take the form H = (H_v | H_w), where H_v is a
//! sparse random matrix drawn blockwise with per-rate Bernoulli densities
//! q_1..q_19 and H_w is a unit lower-triangular accumulator, either the
//! classic dual-diagonal or the randomized variant with one extra entry per
//! column confined to its rate subinterval.
//!
//! Module map:
//! - [`rate`]: exact-rational rate subintervals and boundary lengths.
//! - [`qprofile`]: the density profile q_1..q_19 (tabulated, closed-form, or
//!   custom).
//! - [`construction`]: matrix generation, progressive building, alist I/O.
//! - [`codec`]: systematic encoding and sum-product decoding.
//! - [`channel`]: Gray-mapped PSK/QAM over AWGN, soft demapping, capacity.
//! - [`sim`]: deterministic multi-threaded BER/FER measurement.
//! - [`harq`]: incremental-redundancy sessions and throughput curves.
//! - [`optimizer`]: greedy per-block profile design by golden-section
//!   search.
//!
//! Everything downstream of a seed is reproducible: construction and every
//! simulated frame draw from dedicated counter-derived ChaCha streams (see
//! [`rng`]), so results do not depend on thread count or call order.

pub mod channel;
pub mod codec;
pub mod construction;
pub mod error;
pub mod harq;
pub mod optimizer;
pub mod qprofile;
pub mod rate;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
