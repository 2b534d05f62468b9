//! Rate subintervals and prefix-length boundaries.
//!
//! The design rate range (0.05, 1] is tiled by 19 subintervals
//! (0.05*ell, 0.05*(ell+1)], ell = 1..=19. All membership tests use exact
//! integer cross-multiplication; no floating point is involved anywhere in
//! this module.
//!
//! A parity row t belongs to the prefix of length k+t+1, so its rate is
//! k/(k+t+1); a prefix length n has rate k/n. Boundary lengths are
//! n_ell = floor(20k/ell).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of rate subintervals tiling (0.05, 1].
pub const NUM_SUBINTERVALS: usize = 19;

/// One of the 19 design subintervals (ell/20, (ell+1)/20].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RateSubinterval {
    ell: usize,
}

impl RateSubinterval {
    pub fn new(ell: usize) -> Result<Self> {
        if (1..=NUM_SUBINTERVALS).contains(&ell) {
            Ok(RateSubinterval { ell })
        } else {
            Err(Error::invalid(format!(
                "subinterval index {ell} outside 1..=19"
            )))
        }
    }

    pub fn ell(self) -> usize {
        self.ell
    }

    /// Exclusive lower rate bound as an exact rational.
    pub fn lower(self) -> (usize, usize) {
        (self.ell, 20)
    }

    /// Inclusive upper rate bound as an exact rational.
    pub fn upper(self) -> (usize, usize) {
        (self.ell + 1, 20)
    }

    /// Does rate k/n fall in (ell/20, (ell+1)/20]? Exact integer test.
    pub fn contains_rate(self, k: usize, n: usize) -> bool {
        assert!(n > 0, "rate denominator must be positive");
        self.ell * n < 20 * k && 20 * k <= (self.ell + 1) * n
    }

    /// Subinterval holding rate k/n, or None outside (0.05, 1].
    pub fn of_length(k: usize, n: usize) -> Option<Self> {
        assert!(n > 0);
        if n < k || n >= 20 * k {
            return None;
        }
        // Largest ell with ell*n < 20k; maximality gives 20k <= (ell+1)*n.
        let ell = (20 * k - 1) / n;
        debug_assert!((1..=NUM_SUBINTERVALS).contains(&ell));
        Some(RateSubinterval { ell })
    }

    /// Subinterval of parity row t, i.e. of rate k/(k+t+1).
    pub fn of_row(k: usize, t: usize) -> Option<Self> {
        Self::of_length(k, k + t + 1)
    }

    /// First parity row whose rate falls in this subinterval.
    pub fn first_row(self, k: usize) -> usize {
        // Smallest t with 20k <= (ell+1)(k+t+1).
        let min_len = (20 * k).div_ceil(self.ell + 1);
        min_len.saturating_sub(k + 1)
    }

    /// Last parity row whose rate falls in this subinterval.
    pub fn last_row(self, k: usize) -> usize {
        // Largest t with ell*(k+t+1) < 20k.
        (20 * k - 1) / self.ell - k - 1
    }
}

/// Boundary length n_ell = floor(20k/ell) for ell in 1..=20.
pub fn boundary(k: usize, ell: usize) -> usize {
    assert!(
        (1..=20).contains(&ell),
        "boundary index {ell} outside 1..=20"
    );
    20 * k / ell
}

/// All twenty boundaries, n_1 first.
pub fn boundaries(k: usize) -> [usize; 20] {
    std::array::from_fn(|i| boundary(k, i + 1))
}

/// Parity rows generated while the code grows from n_{ell+1} to n_ell.
/// These are the rows drawn with Bernoulli parameter q_ell.
pub fn block_rows(k: usize, ell: usize) -> std::ops::Range<usize> {
    assert!((1..=NUM_SUBINTERVALS).contains(&ell));
    (boundary(k, ell + 1) - k)..(boundary(k, ell) - k)
}

/// Row range [lo, hi] from which column t of the randomized accumulator
/// draws its extra 1.
///
/// The draw must stay inside the rate subinterval of row t+1 and must not
/// cross the tightest boundary prefix that still contains column t as a
/// non-final column, otherwise that prefix would lose the weight-2 column
/// property. Both bounds are exact-rational; for almost every t they agree
/// and equal n_ell - k - 1 for the subinterval of row t.
pub fn hw_extra_row_range(k: usize, t: usize) -> (usize, usize) {
    let lo = t + 1;
    // Largest ell with n_ell >= k+t+2: the shortest boundary prefix in which
    // column t is not the last column. Its final row caps the draw.
    let lam = 20 * k / (k + t + 2);
    debug_assert!((1..=NUM_SUBINTERVALS).contains(&lam));
    let cap = boundary(k, lam) - k - 1;
    let hi = match RateSubinterval::of_row(k, t + 1) {
        Some(sub) => cap.min(sub.last_row(k)),
        // Row t+1 sits exactly at rate 0.05: only the mother code's last
        // column does this, and its entry is forced onto the sub-diagonal.
        None => cap,
    };
    debug_assert!(lo <= hi);
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_boundaries_k1890() {
        assert_eq!(boundary(1890, 1), 37800);
        assert_eq!(boundary(1890, 19), 1989);
        assert_eq!(boundary(1890, 20), 1890);
        assert_eq!(boundary(1890, 10), 3780);
    }

    #[test]
    fn test_boundaries_non_increasing() {
        for k in [20, 189, 1890, 3781] {
            let b = boundaries(k);
            for w in b.windows(2) {
                assert!(w[0] >= w[1]);
            }
            assert_eq!(b[19], k);
        }
    }

    #[test]
    fn test_subintervals_tile_rows() {
        // Every parity row of the mother code except the very last belongs
        // to exactly one subinterval; the last sits on the open 0.05 edge.
        for k in [20, 189, 1890] {
            let r = boundary(k, 1) - k;
            for t in 0..r - 1 {
                let sub = RateSubinterval::of_row(k, t).unwrap();
                assert!(sub.contains_rate(k, k + t + 1));
                assert!(t >= sub.first_row(k) && t <= sub.last_row(k));
            }
            assert!(RateSubinterval::of_row(k, r - 1).is_none());
        }
    }

    #[test]
    fn test_block_rows_tile_parity_rows() {
        for k in [20, 189, 1890] {
            let mut next = 0;
            for ell in (1..=NUM_SUBINTERVALS).rev() {
                let rows = block_rows(k, ell);
                assert_eq!(rows.start, next);
                next = rows.end;
            }
            assert_eq!(next, boundary(k, 1) - k);
        }
    }

    #[test]
    fn test_membership_is_exact_at_boundaries() {
        // Rate exactly 0.5 belongs to (0.45, 0.50], not (0.50, 0.55].
        let sub = RateSubinterval::of_length(1890, 3780).unwrap();
        assert_eq!(sub.ell(), 9);
        assert!(RateSubinterval::new(10).unwrap().contains_rate(1890, 3779));
        assert!(!RateSubinterval::new(10).unwrap().contains_rate(1890, 3780));
    }

    #[test]
    fn test_hw_extra_range_first_column() {
        // k=1890, t=0: rows of the top subinterval run to n_19 - k - 1 = 98.
        assert_eq!(hw_extra_row_range(1890, 0), (1, 98));
    }

    #[test]
    fn test_hw_extra_range_subinterval_edge() {
        // t=98 is the last row of subinterval 19; the draw moves wholly into
        // subinterval 18, whose rows end at 208.
        assert_eq!(hw_extra_row_range(1890, 98), (99, 208));
        // t=208: row 209 sits exactly on the 0.90 boundary, so the n_18
        // prefix forces the draw.
        assert_eq!(hw_extra_row_range(1890, 208), (209, 209));
    }

    #[test]
    fn test_hw_extra_range_last_column() {
        // The mother code's final column is forced onto the sub-diagonal.
        let r = boundary(1890, 1) - 1890;
        assert_eq!(hw_extra_row_range(1890, r - 2), (r - 1, r - 1));
    }

    #[test]
    fn test_hw_extra_range_stays_inside_every_boundary() {
        for k in [20, 189, 1890] {
            let r = boundary(k, 1) - k;
            for t in 0..r - 1 {
                let (lo, hi) = hw_extra_row_range(k, t);
                assert!(lo == t + 1 && lo <= hi && hi < r);
                for ell in 1..=NUM_SUBINTERVALS {
                    let m = boundary(k, ell) - k;
                    // Column t not last in the ell-prefix => entry inside it.
                    if t + 1 < m {
                        assert!(hi < m, "k={k} t={t} ell={ell}");
                    }
                }
            }
        }
    }
}
