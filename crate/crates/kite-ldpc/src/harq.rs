//! Incremental-redundancy hybrid ARQ on top of the rateless code family.
//!
//! A session encodes the full mother codeword once, transmits a prefix, and
//! on decoding failure transmits further coded bits, decoding ever longer
//! (lower-rate) prefixes until convergence or the mother length is
//! exhausted. Transmissions are whole symbols, so realized lengths are
//! rounded up to a multiple of the bits-per-symbol and capped at the largest
//! symbol-aligned length not exceeding the mother length.

use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use rand::Rng;

use crate::channel::capacity::constellation_capacity;
use crate::channel::{awgn, demap_llr, modulate, ChannelConfig, Constellation};
use crate::codec::{encode, BpDecoder, LlrFrame};
use crate::construction::SparseParityCheck;
use crate::error::{Error, Result};
use crate::rate;
use crate::rng::frame_stream;

/// How the target length grows after a failed decoding attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IncrementSchedule {
    /// Extend the target by a fixed number of coded bits per round.
    Step(usize),
    /// Extend to the next rate boundary n_ell beyond the current length.
    Boundaries,
}

/// Session parameters shared by every frame of a measurement.
#[derive(Debug, Clone)]
pub struct HarqConfig {
    /// Initial target length in coded bits; `None` selects the rate-0.9
    /// boundary n_18.
    pub start: Option<usize>,
    pub schedule: IncrementSchedule,
    /// Decoder iteration cap per attempt.
    pub max_iter: usize,
}

impl Default for HarqConfig {
    fn default() -> Self {
        Self {
            start: None,
            schedule: IncrementSchedule::Boundaries,
            max_iter: 50,
        }
    }
}

/// Outcome of one session.
#[derive(Debug, Clone, Copy)]
pub struct HarqTrace {
    /// Coded bits actually received (symbol-aligned).
    pub n: usize,
    /// Decoding attempts performed.
    pub attempts: usize,
    /// True if some attempt converged.
    pub success: bool,
    /// Converged to a codeword whose information bits differ from the data.
    pub undetected: bool,
    /// Realized spectral efficiency k·b/n in information bits per symbol;
    /// zero when the session failed.
    pub eta: f64,
}

fn next_boundary(k: usize, current: usize) -> usize {
    for ell in (1..=rate::NUM_SUBINTERVALS).rev() {
        let n = rate::boundary(k, ell);
        if n > current {
            return n;
        }
    }
    rate::boundary(k, 1)
}

/// Runs one HARQ session carrying the data bits `v` over AWGN with noise
/// variance `sigma2` per real dimension, drawing noise from `noise_rng`.
pub fn run_session(
    h: &SparseParityCheck,
    constellation: &Constellation,
    sigma2: f64,
    cfg: &HarqConfig,
    v: &[u8],
    noise_rng: &mut ChaCha12Rng,
) -> Result<HarqTrace> {
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(Error::invalid(format!(
            "noise variance {sigma2} must be positive"
        )));
    }
    if cfg.max_iter == 0 {
        return Err(Error::invalid("iteration cap must be at least 1"));
    }
    let k = h.k();
    let n1 = h.n();
    let b = constellation.b();
    let start = cfg.start.unwrap_or_else(|| rate::boundary(k, 18));
    if start < k || start > n1 {
        return Err(Error::invalid(format!(
            "initial length {start} outside the code range {k}..={n1}"
        )));
    }
    if let IncrementSchedule::Step(inc) = cfg.schedule {
        if inc == 0 {
            return Err(Error::invalid("length increment must be at least 1"));
        }
    }
    let cap = n1 / b * b;
    let cw = encode(h, v)?;
    let bits = cw.bits();

    let mut llr_buf: Vec<f64> = Vec::with_capacity(cap);
    let mut received = 0usize;
    let mut target = start;
    let mut attempts = 0usize;
    loop {
        let mut next = (target.div_ceil(b) * b).min(cap);
        if next <= received {
            next = (received + b).min(cap);
        }
        if next == received {
            break; // symbol budget exhausted
        }
        let tx = modulate(&bits[received..next], constellation)?;
        let rx = awgn(&tx, sigma2, constellation.dims(), noise_rng)?;
        let chunk = demap_llr(&rx, constellation, sigma2)?;
        llr_buf.extend_from_slice(chunk.as_slice());
        received = next;
        attempts += 1;

        let hp = h.prefix(received)?;
        let mut dec = BpDecoder::new(&hp);
        let llr = LlrFrame::new(llr_buf.clone())?;
        let result = dec.decode(&llr, cfg.max_iter)?;
        if result.converged() {
            return Ok(HarqTrace {
                n: received,
                attempts,
                success: true,
                undetected: result.info_bits(k) != v,
                eta: (k * b) as f64 / received as f64,
            });
        }
        if received == cap {
            break;
        }
        target = match cfg.schedule {
            IncrementSchedule::Step(inc) => received + inc,
            IncrementSchedule::Boundaries => next_boundary(k, received),
        };
    }
    Ok(HarqTrace {
        n: received,
        attempts,
        success: false,
        undetected: false,
        eta: 0.0,
    })
}

/// One point of a throughput measurement.
#[derive(Debug, Clone, Copy)]
pub struct ThroughputPoint {
    pub esn0_db: f64,
    pub sigma2: f64,
    pub frames: u64,
    /// Mean realized spectral efficiency in bits/symbol, counting failed
    /// sessions as zero.
    pub mean_eta: f64,
    /// Half-width of the 95% confidence interval on `mean_eta`.
    pub ci95: f64,
    /// Fraction of sessions that exhausted the mother code.
    pub failure_rate: f64,
    /// Sessions that converged to the wrong information word.
    pub undetected: u64,
    /// Constrained capacity of the constellation at this noise level, in
    /// bits/symbol — the ceiling for `mean_eta`.
    pub capacity_bits_per_symbol: f64,
}

/// Runs `frames` independent sessions at one Es/N0 point on RNG lane `lane`
/// and returns the aggregate alongside every per-session outcome. Frames run
/// in parallel; the result is identical for any thread count.
pub fn throughput_point(
    h: &SparseParityCheck,
    constellation: &Constellation,
    esn0_db: f64,
    frames: usize,
    cfg: &HarqConfig,
    seed: u64,
    lane: u32,
) -> Result<(ThroughputPoint, Vec<HarqTrace>)> {
    if frames == 0 {
        return Err(Error::invalid("frame count must be at least 1"));
    }
    if frames > u32::MAX as usize {
        return Err(Error::invalid("frame count exceeds the supported range"));
    }
    let k = h.k();
    let sigma2 = ChannelConfig::from_esn0_db(esn0_db)?.sigma2();
    let traces: Vec<HarqTrace> = (0..frames as u32)
        .into_par_iter()
        .map(|f| {
            let mut data_rng = frame_stream(seed, lane, f, 0);
            let mut noise_rng = frame_stream(seed, lane, f, 1);
            let v: Vec<u8> = (0..k).map(|_| data_rng.random::<bool>() as u8).collect();
            run_session(h, constellation, sigma2, cfg, &v, &mut noise_rng)
        })
        .collect::<Result<Vec<_>>>()?;
    let m = frames as f64;
    let mean = traces.iter().map(|t| t.eta).sum::<f64>() / m;
    let ci95 = if frames >= 2 {
        let var = traces
            .iter()
            .map(|t| (t.eta - mean) * (t.eta - mean))
            .sum::<f64>()
            / (m - 1.0);
        1.96 * (var / m).sqrt()
    } else {
        f64::INFINITY
    };
    let failures = traces.iter().filter(|t| !t.success).count();
    let undetected = traces.iter().filter(|t| t.undetected).count() as u64;
    let point = ThroughputPoint {
        esn0_db,
        sigma2,
        frames: frames as u64,
        mean_eta: mean,
        ci95,
        failure_rate: failures as f64 / m,
        undetected,
        capacity_bits_per_symbol: constellation_capacity(constellation, sigma2)?,
    };
    Ok((point, traces))
}

/// Measures mean HARQ throughput on a grid of Es/N0 points. Grid point i
/// uses RNG lane i, so points are statistically independent but individually
/// reproducible.
pub fn throughput_curve(
    h: &SparseParityCheck,
    constellation: &Constellation,
    esn0_db_grid: &[f64],
    frames: usize,
    cfg: &HarqConfig,
    seed: u64,
) -> Result<Vec<ThroughputPoint>> {
    esn0_db_grid
        .iter()
        .enumerate()
        .map(|(lane, &esn0_db)| {
            throughput_point(h, constellation, esn0_db, frames, cfg, seed, lane as u32)
                .map(|(point, _)| point)
        })
        .collect()
}
