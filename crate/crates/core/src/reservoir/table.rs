// SPDX-License-Identifier: Apache-2.0

//! Tabulated boundary values with monotone cubic (PCHIP) interpolation.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sampled `F(E + i0)` on a strictly increasing energy grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TableData", into = "TableData")]
pub struct TableLead {
    energy: Vec<f64>,
    re: Vec<f64>,
    im: Vec<f64>,
    #[serde(skip)]
    slopes_re: Vec<f64>,
    #[serde(skip)]
    slopes_im: Vec<f64>,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableData {
    pub energy: Vec<f64>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Deserialize)]
struct CsvRow {
    #[serde(rename = "E")]
    energy: f64,
    #[serde(rename = "ReF")]
    re: f64,
    #[serde(rename = "ImF")]
    im: f64,
}

impl TryFrom<TableData> for TableLead {
    type Error = Error;

    fn try_from(d: TableData) -> Result<Self> {
        TableLead::new(d.energy, d.re, d.im)
    }
}

impl From<TableLead> for TableData {
    fn from(t: TableLead) -> Self {
        TableData {
            energy: t.energy,
            re: t.re,
            im: t.im,
        }
    }
}

impl TableLead {
    pub fn new(energy: Vec<f64>, re: Vec<f64>, im: Vec<f64>) -> Result<Self> {
        if energy.len() < 2 || re.len() != energy.len() || im.len() != energy.len() {
            return Err(Error::domain("table needs at least two rows and equal column lengths"));
        }
        if energy.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::domain("table energies must be strictly increasing"));
        }
        if re.iter().chain(&im).chain(&energy).any(|x| !x.is_finite()) {
            return Err(Error::domain("table entries must be finite"));
        }
        if let Some(x) = im.iter().find(|&&x| x < 0.0) {
            return Err(Error::domain(format!("Im F must be non-negative, found {x}")));
        }
        let slopes_re = pchip_slopes(&energy, &re);
        let slopes_im = pchip_slopes(&energy, &im);
        Ok(TableLead {
            energy,
            re,
            im,
            slopes_re,
            slopes_im,
        })
    }

    /// Reads a CSV with header `E,ReF,ImF`.
    pub fn from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path)?;
        let (mut e, mut re, mut im) = (Vec::new(), Vec::new(), Vec::new());
        for row in reader.deserialize() {
            let row: CsvRow = row?;
            e.push(row.energy);
            re.push(row.re);
            im.push(row.im);
        }
        TableLead::new(e, re, im)
    }

    pub fn range(&self) -> (f64, f64) {
        (self.energy[0], *self.energy.last().unwrap())
    }

    pub fn eval(&self, energy: f64) -> Result<Complex64> {
        let (lo, hi) = self.range();
        if !(energy >= lo && energy <= hi) {
            return Err(Error::TableRange { energy, lo, hi });
        }
        let k = match self.energy.partition_point(|&x| x <= energy) {
            0 => 0,
            p => (p - 1).min(self.energy.len() - 2),
        };
        let re = hermite(&self.energy, &self.re, &self.slopes_re, k, energy);
        let im = hermite(&self.energy, &self.im, &self.slopes_im, k, energy);
        Ok(Complex64::new(re, im.max(0.0)))
    }
}

/// Fritsch-Carlson derivative estimates.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if s.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && s.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        s
    }
}

fn hermite(x: &[f64], y: &[f64], d: &[f64], k: usize, t: f64) -> f64 {
    let h = x[k + 1] - x[k];
    let s = (t - x[k]) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    h00 * y[k] + h * (h10 * d[k] + h11 * d[k + 1]) + h01 * y[k + 1]
}
