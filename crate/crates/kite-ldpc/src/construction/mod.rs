//! Parity-check matrix construction.
//!
//! A code instance is described by a [`CodeSpec`] (data length k, variant,
//! seed) and a [`QProfile`]. The mother code has r = 19k parity rows; the
//! matrix splits as H = (H_v | H_w) where H_v covers the k information bits
//! and H_w is unit lower triangular over the parity bits. Every length-n
//! truncation of the mother code (rows 0..n-k, columns 0..n) is itself a
//! valid code; see [`SparseParityCheck::prefix`].
//!
//! Two variants exist:
//! * `original` — H_v rows drawn i.i.d. Bernoulli(q_ell) per rate
//!   subinterval block; H_w the fixed dual-diagonal accumulator.
//! * `improved` — same draws followed by per-block row-weight concentration,
//!   and the randomized accumulator for H_w.
//!
//! All randomness comes from two ChaCha streams derived from the seed (see
//! [`crate::rng`]): stream 0 feeds H_v blocks in descending-ell order,
//! stream 1 feeds H_w extra entries in ascending column order. The
//! [`ProgressiveBuilder`] exposes the block-by-block schedule so a build
//! halted at any boundary is bit-identical to the corresponding truncation
//! of the mother code.

mod accumulator;
mod alist;
mod concentrate;

pub use accumulator::accumulator_randomize;
pub use alist::{load_alist, read_alist, save_alist, write_alist};
pub use concentrate::row_weight_concentrate;

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::qprofile::QProfile;
use crate::rate::{self, NUM_SUBINTERVALS};
use crate::rng::{stream, HV_STREAM, HW_STREAM};

/// Which construction recipe to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodeVariant {
    Original,
    Improved,
}

/// Everything needed to rebuild a code deterministically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodeSpec {
    k: usize,
    variant: CodeVariant,
    seed: u64,
    boundaries: [usize; 20],
}

impl CodeSpec {
    /// k must be at least 20 so every rate subinterval owns at least one row.
    pub fn new(k: usize, variant: CodeVariant, seed: u64) -> Result<Self> {
        if k < 20 {
            return Err(Error::invalid(format!(
                "k = {k} is below the minimum of 20"
            )));
        }
        Ok(CodeSpec {
            k,
            variant,
            seed,
            boundaries: rate::boundaries(k),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn variant(&self) -> CodeVariant {
        self.variant
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Replace the seed (used when a CLI flag overrides a config file).
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Prefix lengths n_1..n_20; `boundary(ell)` = floor(20k/ell).
    pub fn boundaries(&self) -> &[usize; 20] {
        &self.boundaries
    }

    pub fn boundary(&self, ell: usize) -> usize {
        assert!((1..=20).contains(&ell));
        self.boundaries[ell - 1]
    }

    /// Mother-code length n_1 = 20k.
    pub fn mother_length(&self) -> usize {
        self.boundaries[0]
    }

    /// Mother-code parity count r = n_1 - k = 19k.
    pub fn r(&self) -> usize {
        self.boundaries[0] - self.k
    }
}

impl<'de> Deserialize<'de> for CodeSpec {
    fn deserialize<D>(de: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            k: usize,
            variant: CodeVariant,
            seed: u64,
            #[serde(default)]
            boundaries: Option<Vec<usize>>,
        }
        let doc = Doc::deserialize(de)?;
        let spec = CodeSpec::new(doc.k, doc.variant, doc.seed).map_err(serde::de::Error::custom)?;
        if let Some(b) = doc.boundaries {
            if b != spec.boundaries {
                return Err(serde::de::Error::custom(
                    "boundaries do not match floor(20k/ell) for this k",
                ));
            }
        }
        Ok(spec)
    }
}

/// Sparse binary parity-check matrix H = (H_v | H_w).
///
/// Rows are stored as sorted column-index lists, split into the H_v part
/// (indices in [0, k)) and the H_w part (indices in [0, r), relative to
/// column k of the full matrix). H_w is unit lower triangular: row t's
/// H_w indices are all ≤ t and always include t itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseParityCheck {
    k: usize,
    hv_rows: Vec<Vec<u32>>,
    hw_rows: Vec<Vec<u32>>,
}

impl SparseParityCheck {
    /// Assemble from row lists, validating the structural invariants.
    pub fn from_parts(k: usize, hv_rows: Vec<Vec<u32>>, hw_rows: Vec<Vec<u32>>) -> Result<Self> {
        if hv_rows.len() != hw_rows.len() {
            return Err(Error::invalid(format!(
                "{} H_v rows but {} H_w rows",
                hv_rows.len(),
                hw_rows.len()
            )));
        }
        for (t, row) in hv_rows.iter().enumerate() {
            if !strictly_increasing(row) || row.last().is_some_and(|&j| j as usize >= k) {
                return Err(Error::invalid(format!(
                    "H_v row {t} is not sorted within [0, {k})"
                )));
            }
        }
        for (t, row) in hw_rows.iter().enumerate() {
            if !strictly_increasing(row) || row.last() != Some(&(t as u32)) {
                return Err(Error::invalid(format!(
                    "H_w row {t} must be sorted, end at its diagonal entry {t}"
                )));
            }
        }
        Ok(SparseParityCheck {
            k,
            hv_rows,
            hw_rows,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of parity rows.
    pub fn r(&self) -> usize {
        self.hv_rows.len()
    }

    /// Code length n = k + r.
    pub fn n(&self) -> usize {
        self.k + self.hv_rows.len()
    }

    /// Information-bit column indices of row t (all < k).
    pub fn hv_row(&self, t: usize) -> &[u32] {
        &self.hv_rows[t]
    }

    /// Parity-bit column indices of row t, relative to column k.
    pub fn hw_row(&self, t: usize) -> &[u32] {
        &self.hw_rows[t]
    }

    /// Total number of ones in the matrix.
    pub fn ones(&self) -> usize {
        self.hv_rows.iter().map(Vec::len).sum::<usize>()
            + self.hw_rows.iter().map(Vec::len).sum::<usize>()
    }

    /// Column weights of the H_v part.
    pub fn col_weights_v(&self) -> Vec<u32> {
        let mut w = vec![0u32; self.k];
        for row in &self.hv_rows {
            for &j in row {
                w[j as usize] += 1;
            }
        }
        w
    }

    /// Column weights of the H_w part.
    pub fn col_weights_w(&self) -> Vec<u32> {
        let mut w = vec![0u32; self.r()];
        for row in &self.hw_rows {
            for &t in row {
                w[t as usize] += 1;
            }
        }
        w
    }

    /// Truncate to length n: the top n-k rows and first n columns. Because
    /// H_w is unit lower triangular, dropping rows drops exactly the columns
    /// beyond n and the result is again a valid code of the same k.
    pub fn prefix(&self, n: usize) -> Result<SparseParityCheck> {
        if n < self.k || n > self.n() {
            return Err(Error::invalid(format!(
                "prefix length {n} outside [{}, {}]",
                self.k,
                self.n()
            )));
        }
        let rp = n - self.k;
        Ok(SparseParityCheck {
            k: self.k,
            hv_rows: self.hv_rows[..rp].to_vec(),
            hw_rows: self.hw_rows[..rp].to_vec(),
        })
    }

    /// SHA-256 over a canonical byte encoding; stable across runs and
    /// platforms, used to stamp outputs with the exact matrix they used.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(b"kite-parity-check-v1");
        hasher.update((self.k as u64).to_le_bytes());
        hasher.update((self.r() as u64).to_le_bytes());
        for (hv, hw) in self.hv_rows.iter().zip(&self.hw_rows) {
            for part in [hv, hw] {
                hasher.update((part.len() as u64).to_le_bytes());
                for &j in part {
                    hasher.update(j.to_le_bytes());
                }
            }
        }
        let out = hasher.finalize();
        let mut hex = String::with_capacity(64);
        for byte in out {
            use std::fmt::Write;
            let _ = write!(hex, "{byte:02x}");
        }
        hex
    }
}

fn strictly_increasing(row: &[u32]) -> bool {
    row.windows(2).all(|w| w[0] < w[1])
}

/// Draw a `rows` × k Bernoulli(q) block as sorted index lists.
///
/// Entries are drawn row-major, one uniform f64 per entry, so the block is
/// a pure function of (k, rows, q, RNG state).
pub fn generate_hv_block<R: Rng>(
    k: usize,
    rows: usize,
    q: f64,
    rng: &mut R,
) -> Result<Vec<Vec<u32>>> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::invalid(format!(
            "Bernoulli parameter {q} outside (0, 1)"
        )));
    }
    Ok((0..rows)
        .map(|_| (0..k as u32).filter(|_| rng.random::<f64>() < q).collect())
        .collect())
}

/// Block-by-block construction state.
///
/// Blocks are built in descending ell (19 first, matching the order in
/// which rows appear in the matrix); halting after block ell yields exactly
/// the boundary prefix of length n_ell. Cloning the builder forks the whole
/// schedule — both RNG streams included — which the profile designer uses
/// to try candidate q values for one block on top of a fixed set of earlier
/// blocks without redrawing them.
#[derive(Debug, Clone)]
pub struct ProgressiveBuilder {
    spec: CodeSpec,
    q: QProfile,
    /// 20 = nothing built yet; otherwise the lowest ell whose block exists.
    built_ell: usize,
    hv_rows: Vec<Vec<u32>>,
    col_weight: Vec<u32>,
    /// Extra-entry row per H_w column, drawn for columns 0..len.
    extra_of_col: Vec<u32>,
    hv_rng: ChaCha12Rng,
    hw_rng: ChaCha12Rng,
}

impl ProgressiveBuilder {
    pub fn new(spec: CodeSpec, q: QProfile) -> Result<Self> {
        if q.k() != spec.k() {
            return Err(Error::invalid(format!(
                "profile is for k = {}, spec has k = {}",
                q.k(),
                spec.k()
            )));
        }
        let seed = spec.seed();
        let k = spec.k();
        Ok(ProgressiveBuilder {
            spec,
            q,
            built_ell: NUM_SUBINTERVALS + 1,
            hv_rows: Vec::new(),
            col_weight: vec![0; k],
            extra_of_col: Vec::new(),
            hv_rng: stream(seed, HV_STREAM),
            hw_rng: stream(seed, HW_STREAM),
        })
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    pub fn profile(&self) -> &QProfile {
        &self.q
    }

    /// Lowest ell whose block has been built (20 = none yet).
    pub fn built_ell(&self) -> usize {
        self.built_ell
    }

    /// Replace the Bernoulli parameter of a block that is not yet built.
    pub fn set_q(&mut self, ell: usize, value: f64) -> Result<()> {
        if ell >= self.built_ell {
            return Err(Error::invalid(format!(
                "block {ell} is already built; only blocks below {} are open",
                self.built_ell
            )));
        }
        self.q.set_q(ell, value)
    }

    /// Build blocks down to and including `ell`.
    pub fn extend_to(&mut self, ell: usize) -> Result<()> {
        if !(1..=NUM_SUBINTERVALS).contains(&ell) {
            return Err(Error::invalid(format!(
                "subinterval index {ell} outside 1..=19"
            )));
        }
        let k = self.spec.k();
        while self.built_ell > ell {
            let lam = self.built_ell - 1;
            let rows = rate::block_rows(k, lam).len();
            let mut block = generate_hv_block(k, rows, self.q.q(lam), &mut self.hv_rng)?;
            if self.spec.variant() == CodeVariant::Improved {
                for row in &block {
                    for &j in row {
                        self.col_weight[j as usize] += 1;
                    }
                }
                row_weight_concentrate(&mut block, &mut self.col_weight);
            }
            self.hv_rows.extend(block);
            self.built_ell = lam;
            if self.spec.variant() == CodeVariant::Improved {
                // H_w extras exist for every column except the current last.
                let r_now = self.spec.boundary(lam) - k;
                while self.extra_of_col.len() + 1 < r_now {
                    let t = self.extra_of_col.len();
                    let (lo, hi) = rate::hw_extra_row_range(k, t);
                    self.extra_of_col
                        .push(self.hw_rng.random_range(lo..=hi) as u32);
                }
            }
        }
        Ok(())
    }

    /// Materialize the boundary prefix at n_ell. Requires the blocks down to
    /// ell to have been built.
    pub fn matrix_at(&self, ell: usize) -> Result<SparseParityCheck> {
        if !(1..=NUM_SUBINTERVALS).contains(&ell) {
            return Err(Error::invalid(format!(
                "subinterval index {ell} outside 1..=19"
            )));
        }
        if self.built_ell > ell {
            return Err(Error::invalid(format!(
                "blocks built only down to {}; extend to {ell} first",
                self.built_ell
            )));
        }
        let k = self.spec.k();
        let rp = self.spec.boundary(ell) - k;
        let hw_rows = match self.spec.variant() {
            CodeVariant::Original => accumulator::dual_diagonal(rp),
            CodeVariant::Improved => {
                let mut extras: Vec<Vec<u32>> = vec![Vec::new(); rp];
                for t in 0..rp - 1 {
                    let s = self.extra_of_col[t] as usize;
                    debug_assert!(s < rp, "extra entries never escape their boundary");
                    extras[s].push(t as u32);
                }
                accumulator::finish_rows(extras)
            }
        };
        SparseParityCheck::from_parts(k, self.hv_rows[..rp].to_vec(), hw_rows)
    }

    /// Extend and materialize in one step.
    pub fn build_to(&mut self, ell: usize) -> Result<SparseParityCheck> {
        self.extend_to(ell)?;
        self.matrix_at(ell)
    }
}

/// Build the full mother code (length 20k, rate 0.05) for a spec + profile.
pub fn build_mother_code(spec: &CodeSpec, q: &QProfile) -> Result<SparseParityCheck> {
    ProgressiveBuilder::new(spec.clone(), q.clone())?.build_to(1)
}
