// SPDX-License-Identifier: Apache-2.0

//! Sweeps of one quantity along `L_list` (or `N_list`) and their artifacts.

use std::fs;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classify::Verdict;
use super::config::{ExperimentConfig, Quantity};
use crate::error::{Error, Result};
use crate::jacobi::{periodize, JacobiModel};
use crate::spectral::tm_inverse_square_integral;
use crate::transport::{crystalline_current, repeated_sample_current, steady_current_with, thouless_current, EbbSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub index: usize,
    pub value: f64,
    pub warnings: Vec<String>,
}

/// Everything written for one experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub verdict: Verdict,
    pub points: Vec<SweepPoint>,
}

impl ExperimentReport {
    pub fn warnings(&self) -> impl Iterator<Item = &String> {
        self.points.iter().flat_map(|p| &p.warnings)
    }

    pub fn has_warnings(&self) -> bool {
        self.warnings().next().is_some()
    }

    /// Columns `index,value`, where the index is `L` or `N`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let head = if self.config.quantity.uses_copies() { "N" } else { "L" };
        w.write_record([head, self.config.quantity.name()])?;
        for p in &self.points {
            w.write_record([p.index.to_string(), format!("{:.17e}", p.value)])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Writes `<stem>.csv` and `<stem>.json` under the configured directory.
    pub fn write(&self) -> Result<()> {
        let out = &self.config.output;
        fs::create_dir_all(&out.dir)?;
        fs::write(out.csv(), self.to_csv()?)?;
        fs::write(out.json(), self.to_json())?;
        Ok(())
    }
}

fn evaluate(config: &ExperimentConfig, model: &JacobiModel, index: usize) -> Result<SweepPoint> {
    let window = config.window();
    let mut warnings = Vec::new();
    let value = match config.quantity {
        Quantity::SteadyCurrent => {
            let spec = EbbSpec::from_model(model, index, config.left.clone(), config.right.clone(), config.coupling, window)?
                .with_grid(config.energy_grid()?)?;
            let r = steady_current_with(&spec, config.tolerances.refinement)?;
            warnings = r.metadata.warnings;
            r.current
        }
        Quantity::ThoulessCurrent => thouless_current(&periodize(model, index, config.internal_coupling)?, window)?,
        Quantity::CrystallineCurrent => crystalline_current(
            &periodize(model, index, config.internal_coupling)?,
            &config.left,
            &config.right,
            config.coupling,
            window,
            config.band_nodes,
        )?,
        Quantity::TmInverseSquareIntegral => {
            let est = tm_inverse_square_integral(model, index, &config.energy_grid()?, config.tolerances.tm_refinement)?;
            if est.flagged {
                warnings.push(format!(
                    "grid refinement changed the integral from {:.6e} to {:.6e}",
                    est.coarse, est.value
                ));
            }
            est.value
        }
        Quantity::RepeatedCurrent => {
            let per = periodize(model, config.l_list[0], config.internal_coupling)?;
            let r = repeated_sample_current(&per, &config.left, &config.right, config.coupling, index, &config.energy_grid()?)?;
            warnings = r.metadata.warnings;
            r.current
        }
    };
    Ok(SweepPoint { index, value, warnings })
}

/// Runs the sweep in parallel and classifies the sequence. Nothing is written to disk.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let config = config.clone().materialized()?;
    let model = config.build_model()?;
    let points = config
        .index()
        .par_iter()
        .map(|&i| evaluate(&config, &model, i))
        .collect::<Result<Vec<_>>>()?;
    let verdict = Verdict::new(
        config.quantity,
        config.index().to_vec(),
        points.iter().map(|p| p.value).collect(),
        config.classifier.clone(),
    )?;
    Ok(ExperimentReport { config, verdict, points })
}
