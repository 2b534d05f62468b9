//! Greedy density-profile design.
//!
//! The profile q_1..q_19 is designed one block at a time, highest rate
//! first. While block ℓ is being tuned, every already-fixed block (indices
//! above ℓ) is frozen — cloning the progressive builder replays identical
//! random draws — and candidate q_ℓ values are scored by simulated BER at a
//! fixed SNR slightly above the Shannon limit for that block's rate. The
//! scalar search over q_ℓ is golden-section; all candidates share one RNG
//! lane, so they see common random numbers and the comparison is paired.

mod golden;

pub use golden::{golden_section_min, inverse_golden_ratio, GoldenResult};

use crate::channel::capacity::bpsk_shannon_limit_ebn0_db;
use crate::channel::{ChannelConfig, Constellation};
use crate::construction::{CodeSpec, CodeVariant, ProgressiveBuilder};
use crate::error::{Error, Result};
use crate::qprofile::QProfile;
use crate::rate::{self, NUM_SUBINTERVALS};
use crate::sim::{simulate_ber, SimConfig};

/// Parameters of the design objective and search.
#[derive(Debug, Clone)]
pub struct ObjectiveConfig {
    /// Frames per objective evaluation.
    pub frames: usize,
    /// Decoder iteration cap per frame.
    pub max_iter: usize,
    /// Search bracket for every q_ℓ; `None` selects (1/(10k), 0.2).
    pub bracket: Option<(f64, f64)>,
    /// Bracket-width stopping tolerance; `None` selects 0.1/k.
    pub tol: Option<f64>,
    /// Objective-evaluation budget per block.
    pub max_evals_per_level: usize,
    /// Margin above the Shannon limit at which each block is scored, in dB.
    pub snr_margin_db: f64,
    /// Seed for both construction and simulation streams.
    pub seed: u64,
    /// Which accumulator the designed family uses.
    pub variant: CodeVariant,
}

impl Default for ObjectiveConfig {
    fn default() -> Self {
        Self {
            frames: 200,
            max_iter: 50,
            bracket: None,
            tol: None,
            max_evals_per_level: 40,
            snr_margin_db: 1.0,
            seed: 0,
            variant: CodeVariant::Improved,
        }
    }
}

/// Search record for one block.
#[derive(Debug, Clone)]
pub struct LevelTrace {
    /// Block index ℓ (19 = highest rate, designed first).
    pub ell: usize,
    /// Chosen Bernoulli parameter.
    pub q: f64,
    /// Eb/N0 at which candidates were scored.
    pub target_ebn0_db: f64,
    /// Noise variance corresponding to `target_ebn0_db` at this block's
    /// actual code rate.
    pub sigma2: f64,
    /// Objective evaluations spent.
    pub evaluations: usize,
    /// True when the budget stopped the search before the tolerance.
    pub budget_exhausted: bool,
    /// Final search bracket around `q`.
    pub final_bracket: (f64, f64),
    /// Every candidate probed, as (q, BER).
    pub evals: Vec<(f64, f64)>,
}

/// A designed profile plus the per-block search records.
#[derive(Debug, Clone)]
pub struct DesignOutcome {
    pub profile: QProfile,
    /// One record per block, in design order (ℓ = 19 first).
    pub levels: Vec<LevelTrace>,
    pub any_budget_exhausted: bool,
}

/// The Eb/N0 (dB) at which block ℓ's candidates are scored: the binary-input
/// AWGN Shannon limit of the block's design rate plus `margin_db`. Blocks
/// below the top use the upper edge 0.05(ℓ+1) of their rate subinterval; the
/// top block's edge is rate 1, so it uses its actual prefix rate k/n_19.
pub fn level_target_ebn0_db(k: usize, ell: usize, margin_db: f64) -> Result<f64> {
    if !(1..=NUM_SUBINTERVALS).contains(&ell) {
        return Err(Error::invalid(format!(
            "subinterval index {ell} outside 1..=19"
        )));
    }
    let rate = if ell == NUM_SUBINTERVALS {
        k as f64 / rate::boundary(k, ell) as f64
    } else {
        0.05 * (ell + 1) as f64
    };
    Ok(bpsk_shannon_limit_ebn0_db(rate)? + margin_db)
}

/// Designs q_1..q_19 for information length `k` by greedy per-block search,
/// highest rate first.
pub fn greedy_design(k: usize, cfg: &ObjectiveConfig) -> Result<DesignOutcome> {
    if cfg.frames == 0 {
        return Err(Error::invalid("frame count must be at least 1"));
    }
    let (q_lo, q_hi) = cfg.bracket.unwrap_or((1.0 / (10.0 * k as f64), 0.2));
    if !(q_lo > 0.0 && q_hi < 1.0 && q_lo < q_hi) {
        return Err(Error::invalid(format!(
            "bracket ({q_lo}, {q_hi}) outside (0, 1)"
        )));
    }
    let tol = cfg.tol.unwrap_or(0.1 / k as f64);
    let spec = CodeSpec::new(k, cfg.variant, cfg.seed)?;
    let bpsk = Constellation::bpsk();
    let mut base = ProgressiveBuilder::new(spec, QProfile::from_formula(k)?)?;
    let mut levels = Vec::with_capacity(NUM_SUBINTERVALS);
    let mut any_budget_exhausted = false;

    for ell in (1..=NUM_SUBINTERVALS).rev() {
        let target_ebn0_db = level_target_ebn0_db(k, ell, cfg.snr_margin_db)?;
        let n_ell = rate::boundary(k, ell);
        let code_rate = k as f64 / n_ell as f64;
        let sigma2 = ChannelConfig::from_ebn0_db(target_ebn0_db, code_rate, 1)?.sigma2();
        let sim_cfg = SimConfig {
            frames: cfg.frames,
            max_iter: cfg.max_iter,
            min_sum: false,
            seed: cfg.seed,
            lane: ell as u32,
            all_zero: false,
        };
        let mut eval_error: Option<Error> = None;
        let objective = |q: f64| -> f64 {
            let attempt = (|| -> Result<f64> {
                let mut candidate = base.clone();
                candidate.set_q(ell, q)?;
                let h = candidate.build_to(ell)?;
                Ok(simulate_ber(&h, &bpsk, sigma2, &sim_cfg)?.ber)
            })();
            match attempt {
                Ok(ber) => ber,
                Err(e) => {
                    eval_error.get_or_insert(e);
                    f64::INFINITY
                }
            }
        };
        let search = golden_section_min(objective, q_lo, q_hi, tol, cfg.max_evals_per_level)?;
        if let Some(e) = eval_error {
            return Err(e);
        }
        base.set_q(ell, search.x)?;
        base.extend_to(ell)?;
        any_budget_exhausted |= search.budget_exhausted;
        levels.push(LevelTrace {
            ell,
            q: search.x,
            target_ebn0_db,
            sigma2,
            evaluations: search.evaluations,
            budget_exhausted: search.budget_exhausted,
            final_bracket: search.final_bracket,
            evals: search.trace,
        });
    }
    Ok(DesignOutcome {
        profile: base.profile().clone(),
        levels,
        any_budget_exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qprofile::QSource;

    #[test]
    fn test_level_targets() {
        // Block 9 covers rates up to 0.5; the rate-1/2 limit is 0.187 dB.
        let db = level_target_ebn0_db(1890, 9, 1.0).unwrap();
        assert!((db - 1.187).abs() < 0.05, "got {db}");
        // The top block's design rate is k/n_19 rather than the edge 1.0.
        let top = level_target_ebn0_db(1890, 19, 1.0).unwrap();
        assert!(top.is_finite() && top > db);
        // Targets grow with the design rate.
        let mut prev = f64::NEG_INFINITY;
        for ell in 1..=19 {
            let t = level_target_ebn0_db(1890, ell, 1.0).unwrap();
            assert!(t > prev);
            prev = t;
        }
        assert!(level_target_ebn0_db(1890, 0, 1.0).is_err());
        assert!(level_target_ebn0_db(1890, 20, 1.0).is_err());
    }

    #[test]
    fn test_greedy_design_smoke() {
        // Small k and a tight budget keep this fast while exercising the
        // whole greedy loop.
        let cfg = ObjectiveConfig {
            frames: 8,
            max_iter: 20,
            max_evals_per_level: 4,
            seed: 5,
            ..ObjectiveConfig::default()
        };
        let out = greedy_design(60, &cfg).unwrap();
        assert_eq!(out.levels.len(), 19);
        assert_eq!(out.levels[0].ell, 19);
        assert_eq!(out.levels[18].ell, 1);
        assert_eq!(out.profile.source(), QSource::Custom);
        let (lo, hi) = (1.0 / 600.0, 0.2);
        for lt in &out.levels {
            assert!(
                lt.q > lo && lt.q < hi,
                "q_{} = {} escaped the bracket",
                lt.ell,
                lt.q
            );
            assert_eq!(lt.evaluations, 4);
            assert!(lt.budget_exhausted);
            assert_eq!(lt.evals.len(), 4);
            assert!(lt.sigma2 > 0.0);
        }
        assert!(out.any_budget_exhausted);
        // The profile the builder carries is the one reported.
        for ell in 1..=19 {
            let lt = out.levels.iter().find(|l| l.ell == ell).unwrap();
            assert_eq!(out.profile.q(ell), lt.q);
        }
    }

    #[test]
    fn test_greedy_design_deterministic() {
        let cfg = ObjectiveConfig {
            frames: 6,
            max_iter: 15,
            max_evals_per_level: 3,
            seed: 11,
            ..ObjectiveConfig::default()
        };
        let a = greedy_design(40, &cfg).unwrap();
        let b = greedy_design(40, &cfg).unwrap();
        assert_eq!(a.profile.values(), b.profile.values());
        for (x, y) in a.levels.iter().zip(&b.levels) {
            assert_eq!(x.evals, y.evals, "block {} saw different objectives", x.ell);
        }
    }

    #[test]
    fn test_validation() {
        let bad_frames = ObjectiveConfig {
            frames: 0,
            ..ObjectiveConfig::default()
        };
        assert!(greedy_design(40, &bad_frames).is_err());
        let bad_bracket = ObjectiveConfig {
            bracket: Some((0.2, 0.1)),
            ..ObjectiveConfig::default()
        };
        assert!(greedy_design(40, &bad_bracket).is_err());
        let tiny_k = ObjectiveConfig::default();
        assert!(greedy_design(19, &tiny_k).is_err());
    }
}
