// SPDX-License-Identifier: Apache-2.0

//! Finite-scale classification of a sequence indexed by sample length.

use serde::{Deserialize, Serialize};

use super::config::Quantity;
use crate::error::{Error, Result};

/// Values below this are treated as this when taking logarithms.
pub const LOG_FLOOR: f64 = 1e-300;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    /// Per-site decay rate of `ln value` that counts as decaying.
    #[serde(default = "default_slope_min")]
    pub slope_min: f64,
    #[serde(default = "default_value_max")]
    pub value_max: f64,
    #[serde(default = "default_floor")]
    pub floor: f64,
}

fn default_slope_min() -> f64 {
    0.02
}
fn default_value_max() -> f64 {
    1e-3
}
fn default_floor() -> f64 {
    1e-3
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            slope_min: default_slope_min(),
            value_max: default_value_max(),
            floor: default_floor(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    DecayingToZero,
    BoundedBelow,
    Inconclusive,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::DecayingToZero => "decaying-to-zero",
            Classification::BoundedBelow => "bounded-below",
            Classification::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub quantity: Quantity,
    /// `L_n`, or `N` for repeated samples.
    pub index: Vec<usize>,
    pub values: Vec<f64>,
    /// Least-squares slope of `ln value` against the index.
    pub slope: f64,
    pub classification: Classification,
    pub thresholds: Thresholds,
}

/// Least-squares slope of `ln max(v, LOG_FLOOR)` against `index`.
pub fn log_slope(index: &[usize], values: &[f64]) -> f64 {
    let n = index.len() as f64;
    if index.len() < 2 {
        return 0.0;
    }
    let x: Vec<f64> = index.iter().map(|&i| i as f64).collect();
    let y: Vec<f64> = values.iter().map(|v| v.max(LOG_FLOOR).ln()).collect();
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Decaying: slope below `-slope_min` and last value below `value_max`.
/// Bounded below: every value above `floor` and slope no steeper than `-slope_min`.
pub fn classify(values: &[f64], slope: f64, t: &Thresholds) -> Classification {
    let last = values.last().copied().unwrap_or(f64::NAN);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if slope < -t.slope_min && last < t.value_max {
        Classification::DecayingToZero
    } else if min > t.floor && slope >= -t.slope_min {
        Classification::BoundedBelow
    } else {
        Classification::Inconclusive
    }
}

impl Verdict {
    pub fn new(quantity: Quantity, index: Vec<usize>, values: Vec<f64>, thresholds: Thresholds) -> Result<Self> {
        if index.len() != values.len() || index.is_empty() {
            return Err(Error::domain("verdict needs one value per index entry"));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(format!("non-finite value {v} in sequence")));
        }
        let slope = log_slope(&index, &values);
        let classification = classify(&values, slope, &thresholds);
        Ok(Verdict {
            quantity,
            index,
            values,
            slope,
            classification,
            thresholds,
        })
    }

    /// Same sequence under different thresholds.
    pub fn reclassified(&self, thresholds: Thresholds) -> Verdict {
        Verdict {
            classification: classify(&self.values, self.slope, &thresholds),
            thresholds,
            ..self.clone()
        }
    }
}
