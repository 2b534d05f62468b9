//! Monte-Carlo bit/frame error measurement over the AWGN channel.
//!
//! Frames are statistically independent: each frame owns two dedicated RNG
//! streams (data and noise) derived from the configured seed, lane, and frame
//! index, so results are bit-identical regardless of thread count or
//! scheduling. Error counts are accumulated as integers for the same reason.

use rayon::prelude::*;

use rand::Rng;

use crate::channel::{awgn, demap_llr, modulate, Constellation};
use crate::codec::{encode, BpDecoder};
use crate::construction::SparseParityCheck;
use crate::error::{Error, Result};
use crate::rng::frame_stream;

/// Parameters for one BER measurement point.
#[derive(Debug, Clone)]
pub struct SimConfig {
    /// Number of independent frames to simulate.
    pub frames: usize,
    /// Decoder iteration cap per frame.
    pub max_iter: usize,
    /// Use the min-sum check-node approximation instead of exact updates.
    pub min_sum: bool,
    /// Base seed; combined with `lane` and the frame index per stream.
    pub seed: u64,
    /// Independent measurement lane (e.g. one per SNR point) so that points
    /// sharing a seed use disjoint random streams.
    pub lane: u32,
    /// Transmit the all-zero codeword instead of random data.
    pub all_zero: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            frames: 100,
            max_iter: 50,
            min_sum: false,
            seed: 0,
            lane: 0,
            all_zero: false,
        }
    }
}

/// Aggregate counts from one measurement point.
#[derive(Debug, Clone, Copy)]
pub struct BerStats {
    /// Frames simulated.
    pub frames: u64,
    /// Information bits observed (frames × k).
    pub bits: u64,
    /// Information bits decoded incorrectly.
    pub bit_errors: u64,
    /// Frames with any information-bit error or without convergence.
    pub frame_errors: u64,
    /// Bit error rate over information bits.
    pub ber: f64,
    /// Frame error rate.
    pub fer: f64,
    /// Half-width of the 95% confidence interval on `ber`, computed from the
    /// per-frame error-count variance (infinite below two frames).
    pub ci95: f64,
}

/// Simulates transmission of `cfg.frames` codewords of the code `h` over
/// AWGN with variance `sigma2` per real dimension and returns error rates.
pub fn simulate_ber(
    h: &SparseParityCheck,
    constellation: &Constellation,
    sigma2: f64,
    cfg: &SimConfig,
) -> Result<BerStats> {
    if cfg.frames == 0 {
        return Err(Error::invalid("frame count must be at least 1"));
    }
    if cfg.frames > u32::MAX as usize {
        return Err(Error::invalid("frame count exceeds the supported range"));
    }
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(Error::invalid(format!(
            "noise variance {sigma2} must be positive"
        )));
    }
    let k = h.k();
    let n = h.n();
    let b = constellation.b();
    let padded = n.div_ceil(b) * b;

    let totals = (0..cfg.frames as u32)
        .into_par_iter()
        .map_init(
            || {
                let mut dec = BpDecoder::new(h);
                dec.set_min_sum(cfg.min_sum);
                dec
            },
            |dec, f| -> Result<(u64, u64, u64)> {
                let mut data_rng = frame_stream(cfg.seed, cfg.lane, f, 0);
                let mut noise_rng = frame_stream(cfg.seed, cfg.lane, f, 1);
                let v: Vec<u8> = if cfg.all_zero {
                    vec![0; k]
                } else {
                    (0..k).map(|_| data_rng.random::<bool>() as u8).collect()
                };
                let cw = encode(h, &v)?;
                let mut bits = cw.bits().to_vec();
                bits.resize(padded, 0);
                let tx = modulate(&bits, constellation)?;
                let rx = awgn(&tx, sigma2, constellation.dims(), &mut noise_rng)?;
                let llr = demap_llr(&rx, constellation, sigma2)?.truncated(n)?;
                let result = dec.decode(&llr, cfg.max_iter)?;
                let errors = v
                    .iter()
                    .zip(result.info_bits(k))
                    .filter(|(a, b)| a != b)
                    .count() as u64;
                let frame_error = u64::from(errors > 0 || !result.converged());
                Ok((errors, errors * errors, frame_error))
            },
        )
        .try_reduce(
            || (0u64, 0u64, 0u64),
            |a, b| Ok((a.0 + b.0, a.1 + b.1, a.2 + b.2)),
        );
    let (err_sum, err_sq_sum, frame_errors) = totals?;

    let m = cfg.frames as f64;
    let kf = k as f64;
    let ber = err_sum as f64 / (m * kf);
    let ci95 = if cfg.frames >= 2 {
        let mean = err_sum as f64 / m;
        let var = (err_sq_sum as f64 - m * mean * mean).max(0.0) / (m - 1.0);
        1.96 * (var / m).sqrt() / kf
    } else {
        f64::INFINITY
    };
    Ok(BerStats {
        frames: cfg.frames as u64,
        bits: cfg.frames as u64 * k as u64,
        bit_errors: err_sum,
        frame_errors,
        ber,
        fer: frame_errors as f64 / m,
        ci95,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_mother_code, CodeSpec, CodeVariant};
    use crate::qprofile::QProfile;

    fn rate_half_code(k: usize, seed: u64) -> SparseParityCheck {
        let spec = CodeSpec::new(k, CodeVariant::Improved, seed).unwrap();
        let q = QProfile::from_formula(k).unwrap();
        let mother = build_mother_code(&spec, &q).unwrap();
        mother.prefix(2 * k).unwrap()
    }

    #[test]
    fn test_error_free_at_high_snr() {
        let h = rate_half_code(189, 7);
        let cfg = SimConfig {
            frames: 20,
            seed: 3,
            ..SimConfig::default()
        };
        // Eb/N0 = 12 dB at rate 1/2 BPSK: essentially noiseless for BP.
        let sigma2 = 1.0 / (2.0 * 0.5 * 10f64.powf(1.2));
        let stats = simulate_ber(&h, &Constellation::bpsk(), sigma2, &cfg).unwrap();
        assert_eq!(stats.bit_errors, 0);
        assert_eq!(stats.frame_errors, 0);
        assert_eq!(stats.ber, 0.0);
        assert_eq!(stats.fer, 0.0);
        assert_eq!(stats.ci95, 0.0);
        assert_eq!(stats.bits, 20 * 189);
    }

    #[test]
    fn test_deterministic_across_calls() {
        let h = rate_half_code(189, 7);
        let cfg = SimConfig {
            frames: 30,
            seed: 5,
            lane: 2,
            ..SimConfig::default()
        };
        let sigma2 = 1.0; // severe noise so errors occur
        let a = simulate_ber(&h, &Constellation::bpsk(), sigma2, &cfg).unwrap();
        let b = simulate_ber(&h, &Constellation::bpsk(), sigma2, &cfg).unwrap();
        assert_eq!(a.bit_errors, b.bit_errors);
        assert_eq!(a.frame_errors, b.frame_errors);
        assert!(a.bit_errors > 0, "noise this severe must cause errors");
        assert!(a.ci95.is_finite());
        assert!(a.ber > 0.0 && a.ber < 0.5);
    }

    #[test]
    fn test_lanes_are_independent_streams() {
        let h = rate_half_code(189, 7);
        let base = SimConfig {
            frames: 25,
            seed: 5,
            ..SimConfig::default()
        };
        let sigma2 = 1.0;
        let a = simulate_ber(&h, &Constellation::bpsk(), sigma2, &base).unwrap();
        let b = simulate_ber(
            &h,
            &Constellation::bpsk(),
            sigma2,
            &SimConfig {
                lane: 1,
                ..base.clone()
            },
        )
        .unwrap();
        assert_ne!(
            a.bit_errors, b.bit_errors,
            "distinct lanes should draw distinct noise"
        );
    }

    #[test]
    fn test_qam_padding_path() {
        // A length that is not a multiple of 6 forces 64-QAM zero-padding.
        let spec = CodeSpec::new(189, CodeVariant::Improved, 7).unwrap();
        let q = QProfile::from_formula(189).unwrap();
        let mother = build_mother_code(&spec, &q).unwrap();
        let code = mother.prefix(391).unwrap();
        assert_ne!(code.n() % 6, 0);
        let cfg = SimConfig {
            frames: 8,
            seed: 1,
            ..SimConfig::default()
        };
        let sigma2 = 0.02;
        let stats = simulate_ber(&code, &Constellation::qam64(), sigma2, &cfg).unwrap();
        assert_eq!(stats.frames, 8);
        assert_eq!(stats.bit_errors, 0, "ultra-clean channel should decode");
    }

    #[test]
    fn test_all_zero_option() {
        let h = rate_half_code(189, 7);
        let cfg = SimConfig {
            frames: 10,
            seed: 9,
            all_zero: true,
            ..SimConfig::default()
        };
        let stats = simulate_ber(&h, &Constellation::bpsk(), 0.4, &cfg).unwrap();
        assert_eq!(stats.frames, 10);
        // With the all-zero codeword the decoder output is checked against
        // zeros; at moderate noise some frames may still fail, which is fine.
        assert!(stats.ber <= 1.0);
    }

    #[test]
    fn test_single_frame_has_unbounded_ci() {
        let h = rate_half_code(189, 7);
        let cfg = SimConfig {
            frames: 1,
            seed: 9,
            ..SimConfig::default()
        };
        let stats = simulate_ber(&h, &Constellation::bpsk(), 0.5, &cfg).unwrap();
        assert!(stats.ci95.is_infinite());
    }

    #[test]
    fn test_validation() {
        let h = rate_half_code(189, 7);
        let bad = SimConfig {
            frames: 0,
            ..SimConfig::default()
        };
        assert!(simulate_ber(&h, &Constellation::bpsk(), 0.5, &bad).is_err());
        let cfg = SimConfig::default();
        assert!(simulate_ber(&h, &Constellation::bpsk(), 0.0, &cfg).is_err());
        assert!(simulate_ber(&h, &Constellation::bpsk(), f64::NAN, &cfg).is_err());
    }
}
