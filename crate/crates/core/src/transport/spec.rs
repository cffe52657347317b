// SPDX-License-Identifier: Apache-2.0

//! The sample-plus-reservoirs description shared by all transport formulas.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::jacobi::{Coefficients, JacobiModel};
use crate::reservoir::Lead;
use crate::spectral::EnergyGrid;

/// Finite sample `J_L` between two leads, coupled at its end sites with strength `lambda`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EbbSpec {
    pub sample: Coefficients,
    pub left: Lead,
    pub right: Lead,
    pub coupling: f64,
    /// `(mu_l, mu_r)`; the grid covers exactly this interval.
    pub grid: EnergyGrid,
}

impl EbbSpec {
    /// Midpoint grid with the default node count over `window`.
    pub fn new(sample: Coefficients, left: Lead, right: Lead, coupling: f64, window: (f64, f64)) -> Result<Self> {
        let grid = EnergyGrid::new(window.0, window.1, crate::spectral::quadrature::DEFAULT_NODES)?;
        let spec = EbbSpec {
            sample,
            left,
            right,
            coupling,
            grid,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// First `sites` sites of `model` as the sample.
    pub fn from_model(model: &JacobiModel, sites: usize, left: Lead, right: Lead, coupling: f64, window: (f64, f64)) -> Result<Self> {
        EbbSpec::new(model.restrict(sites)?, left, right, coupling, window)
    }

    pub fn with_grid(mut self, grid: EnergyGrid) -> Result<Self> {
        self.grid = grid;
        self.validate()?;
        Ok(self)
    }

    pub fn with_nodes(mut self, nodes: usize) -> Result<Self> {
        self.grid.nodes = nodes;
        self.validate()?;
        Ok(self)
    }

    pub fn window(&self) -> (f64, f64) {
        (self.grid.lo, self.grid.hi)
    }

    pub fn sites(&self) -> usize {
        self.sample.b.len()
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        let l = self.sample.b.len();
        if l == 0 || self.sample.a.len() + 1 != l {
            return Err(Error::domain(format!(
                "sample needs L >= 1 diagonal and L - 1 off-diagonal entries, got {} and {}",
                l,
                self.sample.a.len()
            )));
        }
        if self.sample.a.iter().any(|&a| !(a > 0.0) || !a.is_finite()) || self.sample.b.iter().any(|b| !b.is_finite()) {
            return Err(Error::domain("sample couplings must be positive and entries finite"));
        }
        if !self.coupling.is_finite() {
            return Err(Error::domain("coupling must be finite"));
        }
        Ok(())
    }

    /// Sample reversed and leads exchanged; transmittance is invariant under this.
    pub fn mirrored(&self) -> EbbSpec {
        EbbSpec {
            sample: self.sample.reversed(),
            left: self.right.clone(),
            right: self.left.clone(),
            ..self.clone()
        }
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("spec serializes");
        hex::encode(Sha256::digest(bytes))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransportMetadata {
    pub spec_hash: String,
    pub grid: EnergyGrid,
    /// Offset used for lead boundary values; transmittances use `E + i0`.
    pub eta: f64,
    pub refinement_tolerance: f64,
    /// Current on the half-node grid.
    pub coarse_current: f64,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransportResult {
    pub energies: Vec<f64>,
    pub transmittance: Vec<f64>,
    pub current: f64,
    pub metadata: TransportMetadata,
}

impl TransportResult {
    pub fn has_warnings(&self) -> bool {
        !self.metadata.warnings.is_empty()
    }

    /// Columns `E,D`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["E", "D"])?;
        for (e, d) in self.energies.iter().zip(&self.transmittance) {
            w.write_record([format!("{e:.17e}"), format!("{d:.17e}")])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}
