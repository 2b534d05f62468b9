//! Systematic encoding and iterative decoding.
//!
//! Encoding exploits the unit lower-triangular parity part: each parity bit
//! is the XOR of already-known bits, so one forward pass over the rows
//! produces the codeword in time linear in the number of ones. Decoding is
//! flooding-schedule belief propagation (see [`bp`]).

mod bp;

pub use bp::{decode_bp, BpDecoder, DecodeResult, DecodeStatus};

use crate::construction::SparseParityCheck;
use crate::error::{Error, Result};

/// A systematic codeword: the first k bits are the information vector, the
/// rest are parity bits. Truncating to any length ≥ k yields the codeword
/// of the corresponding prefix code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword {
    k: usize,
    bits: Vec<u8>,
}

impl Codeword {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// The information bits (first k).
    pub fn info(&self) -> &[u8] {
        &self.bits[..self.k]
    }

    /// The parity bits (after the first k).
    pub fn parity(&self) -> &[u8] {
        &self.bits[self.k..]
    }
}

fn check_binary(bits: &[u8]) -> Result<()> {
    match bits.iter().position(|&b| b > 1) {
        Some(i) => Err(Error::invalid(format!(
            "bit {i} has non-binary value {}",
            bits[i]
        ))),
        None => Ok(()),
    }
}

/// Encode an information vector against a (prefix) parity-check matrix.
///
/// Row t ends at parity bit t, so w_t = Σ_j Hv(t,j)·v_j ⊕ Σ_{s<t} Hw(t,s)·w_s
/// resolves each parity bit from bits already computed.
pub fn encode(h: &SparseParityCheck, v: &[u8]) -> Result<Codeword> {
    if v.len() != h.k() {
        return Err(Error::invalid(format!(
            "information length {} does not match k = {}",
            v.len(),
            h.k()
        )));
    }
    check_binary(v)?;
    let (k, r) = (h.k(), h.r());
    let mut bits = Vec::with_capacity(k + r);
    bits.extend_from_slice(v);
    for t in 0..r {
        let mut parity = 0u8;
        for &j in h.hv_row(t) {
            parity ^= bits[j as usize];
        }
        let (w_part, diag) = h.hw_row(t).split_at(h.hw_row(t).len() - 1);
        debug_assert_eq!(diag, [t as u32]);
        for &s in w_part {
            parity ^= bits[k + s as usize];
        }
        bits.push(parity);
    }
    Ok(Codeword { k, bits })
}

/// H·cᵀ over GF(2); the all-zero vector iff c is a codeword.
pub fn syndrome(h: &SparseParityCheck, c: &[u8]) -> Result<Vec<u8>> {
    if c.len() != h.n() {
        return Err(Error::invalid(format!(
            "vector length {} does not match n = {}",
            c.len(),
            h.n()
        )));
    }
    check_binary(c)?;
    let k = h.k();
    Ok((0..h.r())
        .map(|t| {
            let mut s = 0u8;
            for &j in h.hv_row(t) {
                s ^= c[j as usize];
            }
            for &w in h.hw_row(t) {
                s ^= c[k + w as usize];
            }
            s
        })
        .collect())
}

/// Per-bit log-likelihood ratios, natural log, positive favoring bit 0.
/// Construction rejects non-finite entries so the decoder can assume
/// finiteness throughout.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrFrame {
    llr: Vec<f64>,
}

impl LlrFrame {
    pub fn new(llr: Vec<f64>) -> Result<Self> {
        match llr.iter().position(|x| !x.is_finite()) {
            Some(i) => Err(Error::NonFiniteLlr(i)),
            None => Ok(LlrFrame { llr }),
        }
    }

    pub fn len(&self) -> usize {
        self.llr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.llr.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.llr
    }

    /// Truncate to the first n entries (prefix decoding).
    pub fn truncated(&self, n: usize) -> Result<LlrFrame> {
        if n > self.llr.len() {
            return Err(Error::invalid(format!(
                "cannot truncate {} LLRs to {n}",
                self.llr.len()
            )));
        }
        Ok(LlrFrame {
            llr: self.llr[..n].to_vec(),
        })
    }
}
