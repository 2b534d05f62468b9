//! Flooding-schedule belief propagation.
//!
//! Check-node updates use the exact pairwise log-domain combination
//! ("box-plus"); an opt-in min-sum mode drops the correction terms.
//! Messages are clamped to ±30: beyond that the update is numerically
//! saturated anyway, and the clamp keeps intermediate sums finite.
//!
//! LLR sign convention everywhere: positive favors bit 0; the hard
//! decision maps llr ≤ 0 to bit 1. One iteration = variable update, check
//! update, posterior hard decision, syndrome test; the decoder exits at the
//! first iteration whose hard decision satisfies every check.

use crate::construction::SparseParityCheck;
use crate::error::{Error, Result};

use super::LlrFrame;

const MESSAGE_CLAMP: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeStatus {
    Converged,
    Failure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub status: DecodeStatus,
    /// Hard-decision bits for all n positions (information bits first).
    pub bits: Vec<u8>,
    /// Iterations actually run (1-based; convergence at the first test
    /// reports 1).
    pub iterations: usize,
}

impl DecodeResult {
    pub fn converged(&self) -> bool {
        self.status == DecodeStatus::Converged
    }

    pub fn info_bits(&self, k: usize) -> &[u8] {
        &self.bits[..k]
    }
}

#[inline]
fn clamp(x: f64) -> f64 {
    x.clamp(-MESSAGE_CLAMP, MESSAGE_CLAMP)
}

/// Exact log-domain combination of two LLRs under a parity constraint.
/// +inf acts as the identity (an empty combination).
#[inline]
fn box_plus(a: f64, b: f64) -> f64 {
    if a.is_infinite() {
        return b;
    }
    if b.is_infinite() {
        return a;
    }
    let magnitude = a.signum() * b.signum() * a.abs().min(b.abs());
    magnitude + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
}

/// Min-sum approximation: magnitude only, no correction terms.
#[inline]
fn box_plus_min(a: f64, b: f64) -> f64 {
    if a.is_infinite() {
        return b;
    }
    if b.is_infinite() {
        return a;
    }
    a.signum() * b.signum() * a.abs().min(b.abs())
}

/// Reusable decoder for one parity-check matrix.
///
/// Owns its message memory: one decode at a time per instance, but
/// independent instances run concurrently on a shared matrix.
#[derive(Debug, Clone)]
pub struct BpDecoder {
    k: usize,
    n: usize,
    /// Edge layout, check-major: edges of row t are row_ptr[t]..row_ptr[t+1].
    row_ptr: Vec<usize>,
    /// Global column (variable) index of each edge.
    col_of_edge: Vec<u32>,
    /// Edge ids grouped by variable: var_ptr[v]..var_ptr[v+1] into edges_of_var.
    var_ptr: Vec<usize>,
    edges_of_var: Vec<u32>,
    min_sum: bool,
    v2c: Vec<f64>,
    c2v: Vec<f64>,
    posterior: Vec<f64>,
    hard: Vec<u8>,
    scan: Vec<f64>,
}

impl BpDecoder {
    pub fn new(h: &SparseParityCheck) -> Self {
        let (k, n, r) = (h.k(), h.n(), h.r());
        let mut row_ptr = Vec::with_capacity(r + 1);
        let mut col_of_edge = Vec::new();
        row_ptr.push(0);
        let mut max_deg = 0usize;
        for t in 0..r {
            for &j in h.hv_row(t) {
                col_of_edge.push(j);
            }
            for &s in h.hw_row(t) {
                col_of_edge.push(k as u32 + s);
            }
            max_deg = max_deg.max(col_of_edge.len() - row_ptr[t]);
            row_ptr.push(col_of_edge.len());
        }
        let edges = col_of_edge.len();

        let mut var_count = vec![0usize; n];
        for &col in &col_of_edge {
            var_count[col as usize] += 1;
        }
        let mut var_ptr = Vec::with_capacity(n + 1);
        var_ptr.push(0);
        for v in 0..n {
            var_ptr.push(var_ptr[v] + var_count[v]);
        }
        let mut fill = var_ptr.clone();
        let mut edges_of_var = vec![0u32; edges];
        for (e, &col) in col_of_edge.iter().enumerate() {
            edges_of_var[fill[col as usize]] = e as u32;
            fill[col as usize] += 1;
        }

        BpDecoder {
            k,
            n,
            row_ptr,
            col_of_edge,
            var_ptr,
            edges_of_var,
            min_sum: false,
            v2c: vec![0.0; edges],
            c2v: vec![0.0; edges],
            posterior: vec![0.0; n],
            hard: vec![0; n],
            scan: vec![0.0; max_deg + 1],
        }
    }

    /// Switch the check update to the min-sum approximation.
    pub fn set_min_sum(&mut self, on: bool) {
        self.min_sum = on;
    }

    pub fn min_sum(&self) -> bool {
        self.min_sum
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn syndrome_ok(&self) -> bool {
        let r = self.row_ptr.len() - 1;
        for t in 0..r {
            let mut parity = 0u8;
            for e in self.row_ptr[t]..self.row_ptr[t + 1] {
                parity ^= self.hard[self.col_of_edge[e] as usize];
            }
            if parity != 0 {
                return false;
            }
        }
        true
    }

    pub fn decode(&mut self, llr: &LlrFrame, max_iter: usize) -> Result<DecodeResult> {
        if llr.len() != self.n {
            return Err(Error::invalid(format!(
                "frame has {} LLRs but the code length is {}",
                llr.len(),
                self.n
            )));
        }
        if max_iter == 0 {
            return Err(Error::invalid("max_iter must be at least 1"));
        }
        let llr = llr.as_slice();
        let combine = if self.min_sum { box_plus_min } else { box_plus };
        self.c2v.fill(0.0);

        for iteration in 1..=max_iter {
            // Variable update: v2c = posterior-so-far minus own incoming.
            for (v, &chan) in llr.iter().enumerate() {
                let mut total = chan;
                for &e in &self.edges_of_var[self.var_ptr[v]..self.var_ptr[v + 1]] {
                    total += self.c2v[e as usize];
                }
                for &e in &self.edges_of_var[self.var_ptr[v]..self.var_ptr[v + 1]] {
                    self.v2c[e as usize] = clamp(total - self.c2v[e as usize]);
                }
            }

            // Check update: each outgoing edge combines all other incoming
            // edges of its row, via prefix/suffix scans.
            let r = self.row_ptr.len() - 1;
            for t in 0..r {
                let lo = self.row_ptr[t];
                let deg = self.row_ptr[t + 1] - lo;
                self.scan[0] = f64::INFINITY;
                for i in 0..deg {
                    self.scan[i + 1] = combine(self.scan[i], self.v2c[lo + i]);
                }
                let mut suffix = f64::INFINITY;
                for i in (0..deg).rev() {
                    self.c2v[lo + i] = clamp(combine(self.scan[i], suffix));
                    suffix = combine(suffix, self.v2c[lo + i]);
                }
            }

            // Posterior, hard decision, parity test.
            for (v, &chan) in llr.iter().enumerate() {
                let mut total = chan;
                for &e in &self.edges_of_var[self.var_ptr[v]..self.var_ptr[v + 1]] {
                    total += self.c2v[e as usize];
                }
                self.posterior[v] = total;
                self.hard[v] = u8::from(total <= 0.0);
            }
            if self.syndrome_ok() {
                return Ok(DecodeResult {
                    status: DecodeStatus::Converged,
                    bits: self.hard.clone(),
                    iterations: iteration,
                });
            }
        }
        Ok(DecodeResult {
            status: DecodeStatus::Failure,
            bits: self.hard.clone(),
            iterations: max_iter,
        })
    }
}

/// One-shot decode; builds a fresh decoder. Prefer [`BpDecoder`] when
/// decoding many frames against the same matrix.
pub fn decode_bp(h: &SparseParityCheck, llr: &LlrFrame, max_iter: usize) -> Result<DecodeResult> {
    BpDecoder::new(h).decode(llr, max_iter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{encode, syndrome};
    use crate::construction::{build_mother_code, CodeSpec, CodeVariant};
    use crate::qprofile::QProfile;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn half_rate_code(k: usize, seed: u64) -> SparseParityCheck {
        let spec = CodeSpec::new(k, CodeVariant::Improved, seed).unwrap();
        let q = QProfile::from_formula(k).unwrap();
        build_mother_code(&spec, &q).unwrap().prefix(2 * k).unwrap()
    }

    fn signs_for(c: &[u8], magnitude: f64) -> Vec<f64> {
        c.iter()
            .map(|&b| if b == 0 { magnitude } else { -magnitude })
            .collect()
    }

    #[test]
    fn test_box_plus_against_tanh_form() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        for _ in 0..2000 {
            let a: f64 = rng.random_range(-10.0..10.0);
            let b: f64 = rng.random_range(-10.0..10.0);
            let reference = 2.0 * ((a / 2.0).tanh() * (b / 2.0).tanh()).atanh();
            assert_relative_eq!(
                box_plus(a, b),
                reference,
                max_relative = 1e-9,
                epsilon = 1e-12
            );
            assert_relative_eq!(box_plus(a, b), box_plus(b, a), epsilon = 1e-15);
        }
    }

    #[test]
    fn test_box_plus_identities() {
        assert_eq!(box_plus(f64::INFINITY, 3.5), 3.5);
        assert_eq!(box_plus(-2.0, f64::INFINITY), -2.0);
        assert_eq!(box_plus(f64::INFINITY, f64::INFINITY), f64::INFINITY);
        assert_eq!(box_plus(0.0, 7.0), 0.0);
        assert_eq!(box_plus_min(5.0, -3.0), -3.0);
        assert_eq!(box_plus_min(f64::INFINITY, -3.0), -3.0);
    }

    #[test]
    fn test_noiseless_converges_first_iteration() {
        let h = half_rate_code(189, 4);
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let v: Vec<u8> = (0..189).map(|_| rng.random_range(0..=1)).collect();
        let c = encode(&h, &v).unwrap();
        let llr = LlrFrame::new(signs_for(c.bits(), 20.0)).unwrap();
        let out = decode_bp(&h, &llr, 50).unwrap();
        assert_eq!(out.status, DecodeStatus::Converged);
        assert_eq!(out.iterations, 1);
        assert_eq!(out.bits, c.bits());
        // Min-sum mode agrees on the noiseless frame.
        let mut dec = BpDecoder::new(&h);
        dec.set_min_sum(true);
        let out = dec.decode(&llr, 50).unwrap();
        assert_eq!(out.status, DecodeStatus::Converged);
        assert_eq!(out.bits, c.bits());
    }

    #[test]
    fn test_single_weak_flip_corrected() {
        let h = half_rate_code(189, 8);
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        let mut decoder = BpDecoder::new(&h);
        let mut failures = 0;
        for trial in 0..30 {
            let v: Vec<u8> = (0..189).map(|_| rng.random_range(0..=1)).collect();
            let c = encode(&h, &v).unwrap();
            let mut llr = signs_for(c.bits(), 20.0);
            let pos = rng.random_range(0..llr.len());
            llr[pos] = if c.bits()[pos] == 0 { -2.0 } else { 2.0 };
            let out = decoder.decode(&LlrFrame::new(llr).unwrap(), 50).unwrap();
            if out.status != DecodeStatus::Converged || out.bits != c.bits() {
                failures += 1;
                eprintln!("trial {trial} pos {pos} failed");
            }
        }
        assert!(failures <= 1, "{failures} of 30 single-flip frames failed");
    }

    #[test]
    fn test_all_zero_llr_fails_at_max_iter() {
        let h = half_rate_code(40, 2);
        let llr = LlrFrame::new(vec![0.0; h.n()]).unwrap();
        let out = decode_bp(&h, &llr, 13).unwrap();
        assert_eq!(out.status, DecodeStatus::Failure);
        assert_eq!(out.iterations, 13);
    }

    #[test]
    fn test_converged_implies_zero_syndrome() {
        // Noisy frames at moderate confidence: every convergence must be a
        // real codeword.
        let h = half_rate_code(60, 9);
        let mut rng = ChaCha12Rng::seed_from_u64(10);
        let mut decoder = BpDecoder::new(&h);
        let mut converged = 0;
        for _ in 0..40 {
            let v: Vec<u8> = (0..60).map(|_| rng.random_range(0..=1)).collect();
            let c = encode(&h, &v).unwrap();
            // Three weak wrong-sign LLRs among strong correct ones.
            let mut llr: Vec<f64> = c
                .bits()
                .iter()
                .map(|&b| if b == 0 { 6.0 } else { -6.0 })
                .collect();
            for _ in 0..3 {
                let i = rng.random_range(0..llr.len());
                llr[i] = -0.2 * llr[i].signum();
            }
            let out = decoder.decode(&LlrFrame::new(llr).unwrap(), 30).unwrap();
            if out.status == DecodeStatus::Converged {
                converged += 1;
                assert!(syndrome(&h, &out.bits).unwrap().iter().all(|&s| s == 0));
            }
        }
        assert!(
            converged > 30,
            "expected most frames to converge, got {converged}"
        );
    }

    #[test]
    fn test_degree_one_check_forces_bit() {
        // H = [1] over a single parity bit: the lone check pins w_0 to 0
        // through the empty-combination identity.
        let h = SparseParityCheck::from_parts(0, vec![vec![]], vec![vec![0]]).unwrap();
        let out = decode_bp(&h, &LlrFrame::new(vec![-5.0]).unwrap(), 10).unwrap();
        assert_eq!(out.status, DecodeStatus::Converged);
        assert_eq!(out.bits, vec![0]);
    }

    #[test]
    fn test_two_bit_toy_posterior() {
        // Single check v + w = 0 with LLRs (-1, +5): messages are exact,
        // both posteriors equal 4 - sign pattern (0, 0).
        let h = SparseParityCheck::from_parts(1, vec![vec![0]], vec![vec![0]]).unwrap();
        let llr = LlrFrame::new(vec![-1.0, 5.0]).unwrap();
        let mut dec = BpDecoder::new(&h);
        dec.set_min_sum(true); // degree-2 check: min-sum is exact
        let out = dec.decode(&llr, 10).unwrap();
        assert_eq!(out.status, DecodeStatus::Converged);
        assert_eq!(out.bits, vec![0, 0]);
        assert_relative_eq!(dec.posterior[0], 4.0, epsilon = 1e-12);
        assert_relative_eq!(dec.posterior[1], 4.0, epsilon = 1e-12);
    }

    #[test]
    fn test_input_validation() {
        let h = half_rate_code(40, 2);
        let llr = LlrFrame::new(vec![0.5; h.n() - 1]).unwrap();
        assert!(decode_bp(&h, &llr, 50).is_err());
        let llr = LlrFrame::new(vec![0.5; h.n()]).unwrap();
        assert!(decode_bp(&h, &llr, 0).is_err());
    }
}
