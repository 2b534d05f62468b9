//! Bernoulli parameter profiles (p-sequences).
//!
//! A profile assigns one Bernoulli parameter q_ell to each of the 19 rate
//! subintervals; rows of H_v generated while the code rate passes through
//! subinterval ell are drawn i.i.d. with parameter q_ell. Profiles come from
//! the published design tables (k = 1890 and 3780), from the empirical
//! closed-form formula, or from a caller-supplied vector (e.g. the output of
//! the greedy designer).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rate::NUM_SUBINTERVALS;

/// Published design table for k = 1890, indexed by ell - 1.
const TABLE_K1890: [f64; NUM_SUBINTERVALS] = [
    0.0011, 0.0011, 0.0011, 0.0012, 0.0012, 0.0012, 0.0013, 0.0014, 0.0015, 0.0017, 0.0018, 0.0028,
    0.0030, 0.0038, 0.0046, 0.0072, 0.0130, 0.0200, 0.0380,
];

/// Published design table for k = 3780, indexed by ell - 1.
const TABLE_K3780: [f64; NUM_SUBINTERVALS] = [
    0.0004, 0.0004, 0.0005, 0.0005, 0.0005, 0.0006, 0.0006, 0.0007, 0.0007, 0.0009, 0.0010, 0.0013,
    0.0016, 0.0020, 0.0023, 0.0039, 0.0050, 0.0110, 0.0170,
];

/// Where a profile's values came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QSource {
    Table,
    Formula,
    Custom,
}

/// The 19 Bernoulli parameters for one data length k.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QProfile {
    k: usize,
    q: [f64; NUM_SUBINTERVALS],
    source: QSource,
}

impl QProfile {
    /// Published table profile; only k = 1890 and k = 3780 exist.
    pub fn from_table(k: usize) -> Result<Self> {
        let q = match k {
            1890 => TABLE_K1890,
            3780 => TABLE_K3780,
            _ => return Err(Error::UnsupportedTableK(k)),
        };
        Ok(QProfile {
            k,
            q,
            source: QSource::Table,
        })
    }

    /// Closed-form profile from [`q_from_formula`].
    pub fn from_formula(k: usize) -> Result<Self> {
        let mut q = [0.0; NUM_SUBINTERVALS];
        for (i, slot) in q.iter_mut().enumerate() {
            *slot = q_from_formula(k, i + 1)?;
        }
        Ok(QProfile {
            k,
            q,
            source: QSource::Formula,
        })
    }

    /// Caller-supplied values, checked against (0, 1).
    pub fn custom(k: usize, values: &[f64]) -> Result<Self> {
        if values.len() != NUM_SUBINTERVALS {
            return Err(Error::invalid(format!(
                "profile needs {NUM_SUBINTERVALS} values, got {}",
                values.len()
            )));
        }
        let mut q = [0.0; NUM_SUBINTERVALS];
        for (i, &v) in values.iter().enumerate() {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::invalid(format!("q_{} = {v} outside (0, 1)", i + 1)));
            }
            q[i] = v;
        }
        Ok(QProfile {
            k,
            q,
            source: QSource::Custom,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn source(&self) -> QSource {
        self.source
    }

    /// Bernoulli parameter for subinterval ell.
    pub fn q(&self, ell: usize) -> f64 {
        assert!((1..=NUM_SUBINTERVALS).contains(&ell));
        self.q[ell - 1]
    }

    pub fn values(&self) -> &[f64; NUM_SUBINTERVALS] {
        &self.q
    }

    /// Replace one entry (used by the greedy designer).
    pub fn set_q(&mut self, ell: usize, value: f64) -> Result<()> {
        assert!((1..=NUM_SUBINTERVALS).contains(&ell));
        if !(value > 0.0 && value < 1.0) {
            return Err(Error::invalid(format!("q_{ell} = {value} outside (0, 1)")));
        }
        self.q[ell - 1] = value;
        self.source = QSource::Custom;
        Ok(())
    }
}

impl<'de> Deserialize<'de> for QProfile {
    fn deserialize<D>(de: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            k: usize,
            q: Vec<f64>,
            source: QSource,
        }
        let doc = Doc::deserialize(de)?;
        let mut profile = QProfile::custom(doc.k, &doc.q).map_err(serde::de::Error::custom)?;
        profile.source = doc.source;
        Ok(profile)
    }
}

/// Empirical design formula: q_ell = (1.65/(1.5 - 0.05 ell)^6 + 2.0) / k,
/// clamped to at most 0.5 (a Bernoulli parameter above one half never helps
/// a sparse code and the raw value exceeds 1 for very small k).
pub fn q_from_formula(k: usize, ell: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if !(1..=NUM_SUBINTERVALS).contains(&ell) {
        return Err(Error::invalid(format!(
            "subinterval index {ell} outside 1..=19"
        )));
    }
    let x = 1.5 - 0.05 * ell as f64;
    let q = (1.65 / x.powi(6) + 2.0) / k as f64;
    Ok(q.min(0.5))
}

/// Published table lookup as a full profile.
pub fn q_from_table(k: usize) -> Result<QProfile> {
    QProfile::from_table(k)
}
