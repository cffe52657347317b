// SPDX-License-Identifier: Apache-2.0

//! Finite-scale comparison of persistent conductance and bounded transfer matrices.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jacobi::JacobiModel;
use crate::reservoir::Lead;
use crate::spectral::density::DEFAULT_PROBE_THRESHOLD;
use crate::spectral::{sigma_ac_probe, EnergyGrid};
use crate::transport::{linear_response, EbbSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcetNode {
    pub energy: f64,
    /// `L_L(mu)` for each `L` in the list, free leads, `lambda = 1`.
    pub conductance: Vec<f64>,
    pub min_conductance: f64,
    pub max_conductance: f64,
    pub min_norm: f64,
    pub max_norm: f64,
    /// `min_L L_L(mu) > threshold`.
    pub conducting: bool,
    /// `max_L ||T_mu(L)|| < norm_threshold`.
    pub bounded: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcetReport {
    pub lengths: Vec<usize>,
    pub threshold: f64,
    pub norm_threshold: f64,
    pub nodes: Vec<AcetNode>,
    /// Fraction of nodes where `conducting == bounded`.
    pub agreement_rate: f64,
}

impl AcetReport {
    /// Columns `E,min_L,max_L,min_norm,max_norm,conducting,bounded`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["E", "min_L", "max_L", "min_norm", "max_norm", "conducting", "bounded"])?;
        for n in &self.nodes {
            w.write_record([
                format!("{:.17e}", n.energy),
                format!("{:.17e}", n.min_conductance),
                format!("{:.17e}", n.max_conductance),
                format!("{:.17e}", n.min_norm),
                format!("{:.17e}", n.max_norm),
                n.conducting.to_string(),
                n.bounded.to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}

pub fn acet_sets_probe(model: &JacobiModel, grid: &EnergyGrid, lengths: &[usize], threshold: f64) -> Result<AcetReport> {
    acet_sets_probe_with(model, grid, lengths, threshold, DEFAULT_PROBE_THRESHOLD)
}

/// Per-node membership in the conducting set and the bounded-transfer-matrix set.
pub fn acet_sets_probe_with(
    model: &JacobiModel,
    grid: &EnergyGrid,
    lengths: &[usize],
    threshold: f64,
    norm_threshold: f64,
) -> Result<AcetReport> {
    if !(threshold > 0.0) || !(norm_threshold > 0.0) {
        return Err(Error::domain("thresholds must be positive"));
    }
    let probe = sigma_ac_probe(model, grid, lengths, norm_threshold)?;
    let specs = lengths
        .iter()
        .map(|&l| EbbSpec::from_model(model, l, Lead::FreeHalfLine, Lead::FreeHalfLine, 1.0, (grid.lo, grid.hi)))
        .collect::<Result<Vec<_>>>()?;
    let nodes = probe
        .par_iter()
        .map(|p| {
            let conductance = specs
                .iter()
                .map(|s| linear_response(s, p.energy))
                .collect::<Result<Vec<f64>>>()?;
            let min_conductance = conductance.iter().copied().fold(f64::INFINITY, f64::min);
            let max_conductance = conductance.iter().copied().fold(0.0, f64::max);
            Ok(AcetNode {
                energy: p.energy,
                min_conductance,
                max_conductance,
                conductance,
                min_norm: p.min_norm,
                max_norm: p.max_norm,
                conducting: min_conductance > threshold,
                bounded: p.max_norm < norm_threshold,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let agree = nodes.iter().filter(|n| n.conducting == n.bounded).count();
    Ok(AcetReport {
        lengths: lengths.to_vec(),
        threshold,
        norm_threshold,
        agreement_rate: agree as f64 / nodes.len() as f64,
        nodes,
    })
}
