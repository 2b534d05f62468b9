//! Constrained (modulation-limited) capacity by numerical integration.
//!
//! Square constellations with independent Gray labels per axis factor into
//! two real PAM channels, so capacity is computed per axis and summed. The
//! per-axis integral h(Y) is evaluated with Simpson's rule on a grid fine
//! relative to σ; C = h(Y) − h(Y|X) with h(Y|X) the Gaussian entropy.

use std::f64::consts::{E, PI};

use super::Constellation;
use crate::error::{Error, Result};

fn gaussian_entropy_bits(sigma2: f64) -> f64 {
    0.5 * (2.0 * PI * E * sigma2).log2()
}

/// Capacity in bits of one real AWGN dimension with a uniform input over
/// `levels` (repeats allowed and weighted accordingly).
pub fn pam_capacity(levels: &[f64], sigma2: f64) -> Result<f64> {
    if levels.is_empty() {
        return Err(Error::invalid("no constellation levels"));
    }
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(Error::invalid(format!(
            "noise variance {sigma2} must be positive"
        )));
    }
    let sigma = sigma2.sqrt();
    let lo = levels.iter().copied().fold(f64::INFINITY, f64::min) - 12.0 * sigma;
    let hi = levels.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 12.0 * sigma;
    let mut steps = ((hi - lo) / (sigma / 16.0)).ceil() as usize;
    steps = steps.max(64);
    if steps % 2 == 1 {
        steps += 1;
    }
    let h = (hi - lo) / steps as f64;
    let norm = 1.0 / ((2.0 * PI * sigma2).sqrt() * levels.len() as f64);
    let density = |y: f64| -> f64 {
        levels
            .iter()
            .map(|&a| (-(y - a) * (y - a) / (2.0 * sigma2)).exp())
            .sum::<f64>()
            * norm
    };
    let integrand = |y: f64| -> f64 {
        let f = density(y);
        if f > 0.0 {
            -f * f.log2()
        } else {
            0.0
        }
    };
    let mut sum = integrand(lo) + integrand(hi);
    for i in 1..steps {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += weight * integrand(lo + i as f64 * h);
    }
    let h_y = sum * h / 3.0;
    Ok((h_y - gaussian_entropy_bits(sigma2)).max(0.0))
}

/// Capacity of a constellation in bits per symbol at noise variance σ² per
/// real dimension, assuming uniform symbols.
pub fn constellation_capacity(c: &Constellation, sigma2: f64) -> Result<f64> {
    let re: Vec<f64> = c.points().iter().map(|p| p.re).collect();
    if c.dims() == 1 {
        return pam_capacity(&re, sigma2);
    }
    let im: Vec<f64> = c.points().iter().map(|p| p.im).collect();
    Ok(pam_capacity(&re, sigma2)? + pam_capacity(&im, sigma2)?)
}

/// Smallest Eb/N0 (dB) at which binary-input AWGN capacity reaches `rate`,
/// found by bisection on Es/N0.
pub fn bpsk_shannon_limit_ebn0_db(rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::invalid(format!(
            "rate {rate} outside (0, 1); binary capacity never reaches 1"
        )));
    }
    let bpsk = Constellation::bpsk();
    let capacity_at = |esn0_db: f64| -> Result<f64> {
        let sigma2 = 1.0 / (2.0 * 10f64.powf(esn0_db / 10.0));
        constellation_capacity(&bpsk, sigma2)
    };
    let (mut lo, mut hi) = (-30.0f64, 30.0f64);
    if capacity_at(lo)? >= rate || capacity_at(hi)? <= rate {
        return Err(Error::invalid(format!(
            "rate {rate} outside the bisection range"
        )));
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if capacity_at(mid)? < rate {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let esn0_db = 0.5 * (lo + hi);
    Ok(esn0_db - 10.0 * rate.log10())
}
