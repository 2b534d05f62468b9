//! JSON experiment configuration documents.
//!
//! Each subcommand loads exactly one document shape. Every document is
//! schema-checked: unknown keys are rejected, and value-level validation
//! (k range, boundary consistency, profile ranges) happens during
//! deserialization wherever the library types define it.

use std::path::Path;

use serde::Deserialize;

use kite_ldpc::construction::{CodeSpec, CodeVariant};
use kite_ldpc::harq::IncrementSchedule;
use kite_ldpc::qprofile::QProfile;

/// Where the density profile q_1..q_19 comes from.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum QSourceConfig {
    /// The published profile for k in {1890, 3780}.
    Table,
    /// The closed-form profile, any k.
    Formula,
    /// Nineteen explicit values q_1..q_19.
    Custom(Vec<f64>),
}

impl QSourceConfig {
    pub fn profile(&self, k: usize) -> kite_ldpc::Result<QProfile> {
        match self {
            QSourceConfig::Table => QProfile::from_table(k),
            QSourceConfig::Formula => QProfile::from_formula(k),
            QSourceConfig::Custom(values) => QProfile::custom(k, values),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            QSourceConfig::Table => "table".into(),
            QSourceConfig::Formula => "formula".into(),
            QSourceConfig::Custom(_) => "custom".into(),
        }
    }
}

/// `build`: construct a mother code, write alist + metadata.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildConfig {
    pub code: CodeSpec,
    pub q_source: QSourceConfig,
    #[serde(default)]
    pub out: Option<String>,
}

/// `ber`: fixed-rate prefix BER sweep over an Eb/N0 grid.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BerConfig {
    pub code: CodeSpec,
    pub q_source: QSourceConfig,
    /// Code rates; each selects the prefix of length round(k/rate).
    pub rates: Vec<f64>,
    pub ebn0_db: Vec<f64>,
    #[serde(default = "default_modulation")]
    pub modulation: String,
    pub frames: usize,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default)]
    pub min_sum: bool,
    #[serde(default)]
    pub all_zero: bool,
    /// Simulation master seed (construction uses `code.seed`).
    pub seed: u64,
    #[serde(default)]
    pub out: Option<String>,
}

/// Retransmission schedule selector.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleConfig {
    Boundaries,
    Step(usize),
}

impl From<ScheduleConfig> for IncrementSchedule {
    fn from(s: ScheduleConfig) -> Self {
        match s {
            ScheduleConfig::Boundaries => IncrementSchedule::Boundaries,
            ScheduleConfig::Step(n) => IncrementSchedule::Step(n),
        }
    }
}

/// `harq`: throughput measurement over an Es/N0 grid.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarqCmdConfig {
    pub code: CodeSpec,
    pub q_source: QSourceConfig,
    #[serde(default = "default_modulation")]
    pub modulation: String,
    pub esn0_db: Vec<f64>,
    pub frames: usize,
    /// Initial coded length; omitted = the rate-0.9 boundary.
    #[serde(default)]
    pub start: Option<usize>,
    #[serde(default = "default_schedule")]
    pub schedule: ScheduleConfig,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    /// Simulation master seed (construction uses `code.seed`).
    pub seed: u64,
    #[serde(default)]
    pub out: Option<String>,
}

/// `optimize`: greedy profile design.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeConfig {
    pub k: usize,
    #[serde(default = "default_variant")]
    pub variant: CodeVariant,
    pub seed: u64,
    pub frames: usize,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    /// Search bracket (lo, hi) for every q; omitted = (1/(10k), 0.2).
    #[serde(default)]
    pub bracket: Option<(f64, f64)>,
    /// Bracket-width tolerance; omitted = 0.1/k.
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default = "default_evals")]
    pub max_evals_per_level: usize,
    #[serde(default = "default_margin")]
    pub snr_margin_db: f64,
    #[serde(default)]
    pub out: Option<String>,
}

fn default_modulation() -> String {
    "bpsk".into()
}

fn default_max_iter() -> usize {
    50
}

fn default_schedule() -> ScheduleConfig {
    ScheduleConfig::Boundaries
}

fn default_variant() -> CodeVariant {
    CodeVariant::Improved
}

fn default_evals() -> usize {
    40
}

fn default_margin() -> f64 {
    1.0
}

/// Loads and schema-checks one config document.
pub fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}
