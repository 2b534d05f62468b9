//! Golden-section search: derivative-free minimization of a scalar function
//! on a bracket, assuming (approximate) unimodality.
//!
//! Each iteration shrinks the bracket by the inverse golden ratio and costs
//! exactly one new function evaluation, because one of the two interior
//! probes is reused.

use crate::error::{Error, Result};

/// Inverse golden ratio (√5 − 1)/2 ≈ 0.618: the bracket contraction factor.
pub fn inverse_golden_ratio() -> f64 {
    (5.0f64.sqrt() - 1.0) / 2.0
}

/// Outcome of a search.
#[derive(Debug, Clone)]
pub struct GoldenResult {
    /// Midpoint of the final bracket — the returned minimizer estimate.
    pub x: f64,
    /// Number of objective evaluations performed.
    pub evaluations: usize,
    /// Every probe in evaluation order as (x, f(x)).
    pub trace: Vec<(f64, f64)>,
    /// Bracket width before the first shrink and after each shrink;
    /// consecutive ratios equal the inverse golden ratio.
    pub widths: Vec<f64>,
    /// True when the evaluation budget ran out before the width tolerance
    /// was reached.
    pub budget_exhausted: bool,
    /// The final bracket [a, b].
    pub final_bracket: (f64, f64),
}

/// Minimizes `f` on `[lo, hi]`, stopping when the bracket is narrower than
/// `tol` or after `max_evals` evaluations, whichever comes first.
pub fn golden_section_min<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
    max_evals: usize,
) -> Result<GoldenResult> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::invalid(format!("invalid bracket [{lo}, {hi}]")));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::invalid(format!("tolerance {tol} must be positive")));
    }
    let invphi = inverse_golden_ratio();
    let (mut a, mut b) = (lo, hi);
    let mut h = b - a;
    let mut widths = vec![h];
    if max_evals < 2 {
        return Ok(GoldenResult {
            x: 0.5 * (a + b),
            evaluations: 0,
            trace: Vec::new(),
            widths,
            budget_exhausted: true,
            final_bracket: (a, b),
        });
    }
    let mut trace = Vec::new();
    let probe = |x: f64, f: &mut F, trace: &mut Vec<(f64, f64)>| -> f64 {
        let fx = f(x);
        trace.push((x, fx));
        fx
    };
    // Interior probes at a + (1-invphi)h and a + invphi*h. The width h is
    // tracked multiplicatively so consecutive recorded widths contract by
    // exactly the inverse golden ratio (up to one rounding each).
    let invphi2 = 1.0 - invphi;
    let mut c = a + invphi2 * h;
    let mut d = a + invphi * h;
    let mut fc = probe(c, &mut f, &mut trace);
    let mut fd = probe(d, &mut f, &mut trace);
    let mut evaluations = 2;
    let mut budget_exhausted = false;
    while h > tol {
        if evaluations >= max_evals {
            budget_exhausted = true;
            break;
        }
        h *= invphi;
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = a + invphi2 * h;
            fc = probe(c, &mut f, &mut trace);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * h;
            fd = probe(d, &mut f, &mut trace);
        }
        evaluations += 1;
        widths.push(h);
    }
    Ok(GoldenResult {
        x: 0.5 * (a + b),
        evaluations,
        trace,
        widths,
        budget_exhausted,
        final_bracket: (a, b),
    })
}
