// SPDX-License-Identifier: Apache-2.0

//! Side-by-side empirical decay rates.

use serde::{Deserialize, Serialize};

use super::classify::{Classification, Verdict};
use super::config::Quantity;
use crate::error::{Error, Result};

pub const RATE_LABEL: &str = "empirical log-slopes per site from finite-L fits; no rigorous rates are implied";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub model: String,
    pub quantity: Quantity,
    pub slope: f64,
    pub classification: Classification,
    pub last_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub label: String,
    pub rows: Vec<RateRow>,
}

/// Needs at least two verdicts.
pub fn rate_report(verdicts: &[(String, Verdict)]) -> Result<RateReport> {
    if verdicts.len() < 2 {
        return Err(Error::domain("rate report needs at least two verdicts"));
    }
    let rows = verdicts
        .iter()
        .map(|(model, v)| RateRow {
            model: model.clone(),
            quantity: v.quantity,
            slope: v.slope,
            classification: v.classification,
            last_value: *v.values.last().expect("verdicts are non-empty"),
        })
        .collect();
    Ok(RateReport {
        label: RATE_LABEL.to_string(),
        rows,
    })
}

impl RateReport {
    pub fn slope(&self, model: &str, quantity: Quantity) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.model == model && r.quantity == quantity)
            .map(|r| r.slope)
    }

    /// Columns `model,quantity,slope,classification,last_value`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["model", "quantity", "slope", "classification", "last_value"])?;
        for r in &self.rows {
            w.write_record([
                r.model.clone(),
                r.quantity.name().to_string(),
                format!("{:.6e}", r.slope),
                r.classification.name().to_string(),
                format!("{:.6e}", r.last_value),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }

    /// Plain-text table, one row per model, quantities as columns.
    pub fn to_table(&self) -> String {
        let quantities = [
            Quantity::SteadyCurrent,
            Quantity::ThoulessCurrent,
            Quantity::CrystallineCurrent,
            Quantity::TmInverseSquareIntegral,
        ];
        let mut models: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !models.contains(&r.model.as_str()) {
                models.push(&r.model);
            }
        }
        let mut out = format!("# {}\n{:<24}", self.label, "model");
        for q in quantities {
            out.push_str(&format!(" {:>28}", q.name()));
        }
        out.push('\n');
        for m in models {
            out.push_str(&format!("{m:<24}"));
            for q in quantities {
                match self.slope(m, q) {
                    Some(s) => out.push_str(&format!(" {s:>28.4e}")),
                    None => out.push_str(&format!(" {:>28}", "-")),
                }
            }
            out.push('\n');
        }
        out
    }
}
