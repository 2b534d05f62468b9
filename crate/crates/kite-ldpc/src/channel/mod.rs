//! Modulation, AWGN, and exact soft demapping.
//!
//! Supported constellations: BPSK, QPSK, 16-QAM, 64-QAM, all normalized to
//! unit average symbol energy and Gray-labeled per axis (reflected binary
//! code on I and Q independently). Bit order within a symbol: most
//! significant label bit first, I-axis bits before Q-axis bits.
//!
//! Noise is specified as variance per real dimension (σ² = N0/2 at unit
//! symbol energy); BPSK occupies one real dimension, everything else two.
//! The demapper computes exact per-bit posteriors by log-sum-exp over the
//! constellation — no max-log shortcut — and returns LLRs in the decoder's
//! convention (positive favors bit 0).

pub mod capacity;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::codec::LlrFrame;
use crate::error::{Error, Result};

/// A labeled constellation with unit average energy.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    name: &'static str,
    b: usize,
    dims: usize,
    /// Point of each b-bit label; index = label value.
    points: Vec<Complex64>,
}

fn gray_decode(mut g: u32) -> u32 {
    let mut shift = 1;
    while shift < 32 {
        g ^= g >> shift;
        shift <<= 1;
    }
    g
}

/// Amplitude of axis label `g` among 2^m Gray-labeled levels spaced 2α:
/// label 0 sits at the most positive level.
fn axis_amplitude(g: u32, m: usize, alpha: f64) -> f64 {
    let u = gray_decode(g) as f64;
    ((1u32 << m) as f64 - 1.0 - 2.0 * u) * alpha
}

impl Constellation {
    pub fn bpsk() -> Self {
        let points = vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
        Constellation {
            name: "bpsk",
            b: 1,
            dims: 1,
            points,
        }
    }

    pub fn qpsk() -> Self {
        Self::square_qam("qpsk", 1, 1.0 / 2f64.sqrt())
    }

    pub fn qam16() -> Self {
        Self::square_qam("16qam", 2, 1.0 / 10f64.sqrt())
    }

    pub fn qam64() -> Self {
        Self::square_qam("64qam", 3, 1.0 / 42f64.sqrt())
    }

    /// Square QAM with m Gray-labeled bits per axis; α scales the lattice to
    /// unit average energy.
    fn square_qam(name: &'static str, m: usize, alpha: f64) -> Self {
        let b = 2 * m;
        let points = (0..1u32 << b)
            .map(|label| {
                let i_label = label >> m;
                let q_label = label & ((1 << m) - 1);
                Complex64::new(
                    axis_amplitude(i_label, m, alpha),
                    axis_amplitude(q_label, m, alpha),
                )
            })
            .collect();
        Constellation {
            name,
            b,
            dims: 2,
            points,
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "bpsk" => Ok(Self::bpsk()),
            "qpsk" => Ok(Self::qpsk()),
            "16qam" => Ok(Self::qam16()),
            "64qam" => Ok(Self::qam64()),
            _ => Err(Error::invalid(format!(
                "unknown modulation {name:?}; expected bpsk, qpsk, 16qam, or 64qam"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    /// Bits per symbol.
    pub fn b(&self) -> usize {
        self.b
    }

    /// Real dimensions carrying signal (1 for BPSK, 2 otherwise).
    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, label: usize) -> Complex64 {
        self.points[label]
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn avg_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.points.len() as f64
    }

    /// Audit export: every point with its label.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Point {
            label: usize,
            i: f64,
            q: f64,
        }
        #[derive(Serialize)]
        struct Doc<'a> {
            name: &'a str,
            bits_per_symbol: usize,
            dimensions: usize,
            points: Vec<Point>,
        }
        let doc = Doc {
            name: self.name,
            bits_per_symbol: self.b,
            dimensions: self.dims,
            points: self
                .points
                .iter()
                .enumerate()
                .map(|(label, p)| Point {
                    label,
                    i: p.re,
                    q: p.im,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("plain data serializes")
    }
}

/// Noise level plus the SNR bookkeeping around it (unit symbol energy).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    sigma2: f64,
}

impl ChannelConfig {
    /// Directly from the per-dimension noise variance.
    pub fn from_sigma2(sigma2: f64) -> Result<Self> {
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::invalid(format!(
                "noise variance {sigma2} must be positive"
            )));
        }
        Ok(ChannelConfig { sigma2 })
    }

    /// From symbol SNR: Es/N0 = 1/(2σ²).
    pub fn from_esn0_db(esn0_db: f64) -> Result<Self> {
        Self::from_sigma2(1.0 / (2.0 * 10f64.powf(esn0_db / 10.0)))
    }

    /// From information-bit SNR at code rate `rate` and `b` bits/symbol:
    /// Es = rate·b·Eb, so σ² = 1/(2·rate·b·(Eb/N0)).
    pub fn from_ebn0_db(ebn0_db: f64, rate: f64, b: usize) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::invalid(format!("code rate {rate} outside (0, 1]")));
        }
        if b == 0 {
            return Err(Error::invalid("bits per symbol must be at least 1"));
        }
        Self::from_sigma2(1.0 / (2.0 * rate * b as f64 * 10f64.powf(ebn0_db / 10.0)))
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn esn0_db(&self) -> f64 {
        10.0 * (1.0 / (2.0 * self.sigma2)).log10()
    }

    pub fn ebn0_db(&self, rate: f64, b: usize) -> f64 {
        10.0 * (1.0 / (2.0 * rate * b as f64 * self.sigma2)).log10()
    }
}

/// Map bits (values 0/1) onto constellation symbols, b bits per symbol,
/// most significant label bit first.
pub fn modulate(bits: &[u8], c: &Constellation) -> Result<Vec<Complex64>> {
    if !bits.len().is_multiple_of(c.b()) {
        return Err(Error::invalid(format!(
            "{} bits do not fill whole {}-bit symbols",
            bits.len(),
            c.b()
        )));
    }
    bits.chunks_exact(c.b())
        .map(|chunk| {
            let mut label = 0usize;
            for &bit in chunk {
                if bit > 1 {
                    return Err(Error::invalid(format!("non-binary bit value {bit}")));
                }
                label = label << 1 | bit as usize;
            }
            Ok(c.point(label))
        })
        .collect()
}

/// Add white Gaussian noise, variance `sigma2` per real dimension. `dims`
/// is 1 for BPSK (noise on the real axis only), 2 otherwise. `sigma2 = 0`
/// passes symbols through unchanged; the same number of RNG draws is
/// consumed either way, so noise streams line up across noise levels.
pub fn awgn<R: Rng>(
    symbols: &[Complex64],
    sigma2: f64,
    dims: usize,
    rng: &mut R,
) -> Result<Vec<Complex64>> {
    if !(sigma2 >= 0.0 && sigma2.is_finite()) {
        return Err(Error::invalid(format!(
            "noise variance {sigma2} must be non-negative"
        )));
    }
    if dims != 1 && dims != 2 {
        return Err(Error::invalid(format!("dims {dims} must be 1 or 2")));
    }
    let sigma = sigma2.sqrt();
    Ok(symbols
        .iter()
        .map(|&s| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = if dims == 2 {
                rng.sample(StandardNormal)
            } else {
                0.0
            };
            s + Complex64::new(re * sigma, im * sigma)
        })
        .collect())
}

/// Exact per-bit LLRs: for bit j of each symbol,
/// log Σ_{x: bit_j=0} exp(−|y−x|²/2σ²) − log Σ_{x: bit_j=1} exp(−|y−x|²/2σ²),
/// evaluated with max-shifted log-sum-exp.
pub fn demap_llr(symbols: &[Complex64], c: &Constellation, sigma2: f64) -> Result<LlrFrame> {
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(Error::invalid(format!(
            "noise variance {sigma2} must be positive"
        )));
    }
    let b = c.b();
    let size = c.size();
    let mut llr = Vec::with_capacity(symbols.len() * b);
    let mut metric = vec![0.0f64; size];
    for &y in symbols {
        for (label, m) in metric.iter_mut().enumerate() {
            *m = -(y - c.point(label)).norm_sqr() / (2.0 * sigma2);
        }
        for j in 0..b {
            // Bit j is label bit (b-1-j) counted from the LSB.
            let mask = 1usize << (b - 1 - j);
            let lse = |want_one: bool| -> f64 {
                let mut max = f64::NEG_INFINITY;
                for (label, &m) in metric.iter().enumerate() {
                    if (label & mask != 0) == want_one && m > max {
                        max = m;
                    }
                }
                let mut sum = 0.0;
                for (label, &m) in metric.iter().enumerate() {
                    if (label & mask != 0) == want_one {
                        sum += (m - max).exp();
                    }
                }
                max + sum.ln()
            };
            llr.push(lse(false) - lse(true));
        }
    }
    LlrFrame::new(llr)
}
