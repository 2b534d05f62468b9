//! Parity-part construction: the classic dual-diagonal accumulator and its
//! randomized variant.
//!
//! Both produce a unit lower-triangular H_w, which is what makes recursive
//! encoding possible. The randomized variant replaces each column's fixed
//! subdiagonal 1 with a single 1 placed uniformly at random below the
//! diagonal, confined so that it stays inside the rate subinterval of the
//! row right below the column. That confinement is what keeps every
//! boundary-length prefix of H_w at full column weight: truncating the
//! matrix at any boundary n_ell leaves every column but the last with
//! weight exactly 2.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rate::hw_extra_row_range;

use super::CodeSpec;

/// Dual-diagonal accumulator: row 0 is {0}, row t is {t-1, t}.
pub(crate) fn dual_diagonal(r: usize) -> Vec<Vec<u32>> {
    (0..r)
        .map(|t| {
            if t == 0 {
                vec![0]
            } else {
                vec![t as u32 - 1, t as u32]
            }
        })
        .collect()
}

/// Randomized accumulator for the full mother code (r = n_1 - k rows).
///
/// Column t < r-1 gets its diagonal 1 plus one extra 1 at a row drawn
/// uniformly from [`hw_extra_row_range`]; the last column keeps only its
/// diagonal. Columns are drawn in ascending order, one draw per column, so
/// the layout is reproducible from the RNG state alone.
pub fn accumulator_randomize<R: Rng>(
    r: usize,
    spec: &CodeSpec,
    rng: &mut R,
) -> Result<Vec<Vec<u32>>> {
    if r != spec.r() || r < 2 {
        return Err(Error::invalid(format!(
            "parity count {r} does not match the mother code ({} rows)",
            spec.r()
        )));
    }
    let mut extras: Vec<Vec<u32>> = vec![Vec::new(); r];
    for t in 0..r - 1 {
        let (lo, hi) = hw_extra_row_range(spec.k(), t);
        let i1 = rng.random_range(lo..=hi);
        debug_assert!(i1 > t && i1 < r);
        extras[i1].push(t as u32);
    }
    Ok(finish_rows(extras))
}

/// Append the diagonal to per-row extra lists (extras are all below the
/// diagonal and already in ascending column order).
pub(crate) fn finish_rows(extras: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    extras
        .into_iter()
        .enumerate()
        .map(|(s, mut row)| {
            debug_assert!(row.iter().all(|&t| (t as usize) < s));
            row.push(s as u32);
            row
        })
        .collect()
}
