// SPDX-License-Identifier: Apache-2.0

//! Reservoirs seen through the boundary values of their Borel transforms.

use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::mfunction::{m_function, Side};
use super::table::{TableData, TableLead};
use crate::error::{Error, Result};
use crate::jacobi::{Coefficients, PeriodicJacobi};
use crate::spectral::EnergyGrid;

/// `E` belongs to the ac support when `Im F(E + i0)` exceeds this.
pub const SUPPORT_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LeadDocument", into = "LeadDocument")]
pub enum Lead {
    FreeHalfLine,
    WideBand { gamma: f64 },
    PeriodicHalfLine { per: PeriodicJacobi, side: Side },
    Table(TableLead),
}

/// JSON form `{kind, params}`.
#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "kebab-case", deny_unknown_fields)]
pub enum LeadDocument {
    FreeHalfLine,
    WideBand {
        gamma: f64,
    },
    PeriodicHalfLine {
        per: PeriodicJacobi,
        side: Side,
    },
    Table(TableSource),
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TableSource {
    Inline(TableData),
    Csv { csv: PathBuf },
}

impl TryFrom<LeadDocument> for Lead {
    type Error = Error;

    fn try_from(doc: LeadDocument) -> Result<Self> {
        Ok(match doc {
            LeadDocument::FreeHalfLine => Lead::FreeHalfLine,
            LeadDocument::WideBand { gamma } => Lead::wide_band(gamma)?,
            LeadDocument::PeriodicHalfLine { per, side } => Lead::PeriodicHalfLine { per, side },
            LeadDocument::Table(TableSource::Inline(d)) => Lead::Table(TableLead::try_from(d)?),
            LeadDocument::Table(TableSource::Csv { csv }) => Lead::Table(TableLead::from_csv(csv)?),
        })
    }
}

impl From<Lead> for LeadDocument {
    fn from(lead: Lead) -> Self {
        match lead {
            Lead::FreeHalfLine => LeadDocument::FreeHalfLine,
            Lead::WideBand { gamma } => LeadDocument::WideBand { gamma },
            Lead::PeriodicHalfLine { per, side } => LeadDocument::PeriodicHalfLine { per, side },
            Lead::Table(t) => LeadDocument::Table(TableSource::Inline(t.into())),
        }
    }
}

/// `F(z) = (-z + sqrt(z - 2) sqrt(z + 2)) / 2`, the Herglotz root of `F^2 + z F + 1 = 0`.
pub fn free_half_line_borel(z: Complex64) -> Complex64 {
    let z = Complex64::new(z.re, z.im + 0.0);
    0.5 * (-z + (z - 2.0).sqrt() * (z + 2.0).sqrt())
}

impl Lead {
    pub fn wide_band(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::domain(format!("wide-band gamma must be positive, got {gamma}")));
        }
        Ok(Lead::WideBand { gamma })
    }

    pub fn periodic(per: PeriodicJacobi, side: Side) -> Self {
        Lead::PeriodicHalfLine { per, side }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Lead::FreeHalfLine => "free-half-line",
            Lead::WideBand { .. } => "wide-band",
            Lead::PeriodicHalfLine { .. } => "periodic-half-line",
            Lead::Table(_) => "table",
        }
    }

    /// `F(E + i0)`.
    pub fn borel(&self, energy: f64) -> Result<Complex64> {
        self.borel_at(energy, 0.0)
    }

    /// `F(E + i eta)`. Tabulated leads only know the boundary value and ignore `eta`.
    pub fn borel_at(&self, energy: f64, eta: f64) -> Result<Complex64> {
        if !(eta >= 0.0) {
            return Err(Error::domain(format!("eta must be non-negative, got {eta}")));
        }
        match self {
            Lead::FreeHalfLine => Ok(free_half_line_borel(Complex64::new(energy, eta))),
            Lead::WideBand { gamma } => Ok(Complex64::new(0.0, *gamma)),
            Lead::PeriodicHalfLine { per, side } => Ok(m_function(per, *side, energy, eta)?.value),
            Lead::Table(t) => t.eval(energy),
        }
    }

    pub fn in_ac_support(&self, energy: f64) -> Result<bool> {
        Ok(self.borel(energy)?.im > SUPPORT_TOLERANCE)
    }

    /// True iff `Im F(E + i0) > SUPPORT_TOLERANCE` at every node of `grid`.
    pub fn ac_support_contains(&self, grid: &EnergyGrid) -> Result<bool> {
        grid.validate()?;
        for e in grid.points() {
            if !self.in_ac_support(e)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// First `sites` sites of the lead, ordered outward from the contact site `psi`.
    pub fn outward_chain(&self, sites: usize) -> Result<Coefficients> {
        if sites == 0 {
            return Err(Error::domain("truncation depth must be at least 1"));
        }
        match self {
            Lead::FreeHalfLine => Ok(Coefficients {
                a: vec![1.0; sites - 1],
                b: vec![0.0; sites],
            }),
            Lead::PeriodicHalfLine { per, side } => {
                let oriented = match side {
                    Side::Right => per.clone(),
                    Side::Left => per.reflected(),
                };
                let mut c = oriented.half_line(sites);
                c.a.truncate(sites - 1);
                Ok(c)
            }
            other => Err(Error::UnsupportedLead(other.kind_name().to_string())),
        }
    }
}
