// SPDX-License-Identifier: Apache-2.0

//! Density estimates and transfer-matrix probes of the absolutely continuous spectrum.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::borel::{BorelSource, BorelTransform};
use super::quadrature::{weighted_sum, EnergyGrid};
use crate::error::{Error, Result};
use crate::jacobi::transfer::{sweep_coefficients, transfer_product};
use crate::jacobi::JacobiModel;

pub const DEFAULT_REFINEMENT_TOLERANCE: f64 = 1e-3;
pub const DEFAULT_PROBE_THRESHOLD: f64 = 1e2;

/// `Im F(E + i eta) / pi`.
pub fn ac_density(model: &JacobiModel, energy: f64, eta: f64) -> Result<f64> {
    Ok(ac_density_with(&BorelTransform::default(), model, energy, eta)?.0)
}

/// Density and the depth warning of the underlying continued fraction.
pub fn ac_density_with(
    transform: &BorelTransform,
    model: &JacobiModel,
    energy: f64,
    eta: f64,
) -> Result<(f64, bool)> {
    if !(eta > 0.0) {
        return Err(Error::domain(format!("eta must be positive, got {eta}")));
    }
    let v = transform.evaluate(BorelSource::Model(model), Complex64::new(energy, eta))?;
    Ok((v.value.im.max(0.0) / PI, v.depth_warning))
}

/// `(1/pi) / (|u(n)|^2 + a_n^2 |u(n+1)|^2)` for the Dirichlet solution `u(0) = 0`, `u(1) = 1`.
pub fn weak_density_approx(model: &JacobiModel, energy: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("weak density needs n >= 1"));
    }
    let c = model.coefficients(n)?;
    let t = transfer_product(&c.a, &c.b, energy)?;
    // first column of T_E(n) is [u(n+1), a_n u(n)]
    let an = c.a[n - 1];
    let [[u_next, _], [an_un, _]] = t.matrix.0;
    let scaled = (an_un / an).powi(2) + (an * u_next).powi(2);
    Ok((-2.0 * t.log_scale).exp() / (PI * scaled))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralEstimate {
    pub value: f64,
    /// Same rule at half the nodes.
    pub coarse: f64,
    /// Fine and coarse values differ by more than the tolerance times the interval length.
    pub flagged: bool,
}

/// Quadrature of `||T_E(L)||^{-2}` over the grid interval.
pub fn tm_inverse_square_integral(
    model: &JacobiModel,
    length: usize,
    grid: &EnergyGrid,
    tolerance: f64,
) -> Result<IntegralEstimate> {
    grid.validate()?;
    if length == 0 {
        return Err(Error::domain("L must be at least 1"));
    }
    let c = model.coefficients(length)?;
    let integrate = |g: &EnergyGrid| -> Result<f64> {
        let (x, w) = g.points_and_weights();
        let f = x
            .par_iter()
            .map(|&e| transfer_product(&c.a, &c.b, e).map(|t| t.inverse_square_norm()))
            .collect::<Result<Vec<f64>>>()?;
        Ok(weighted_sum(&w, &f))
    };
    let value = integrate(grid)?;
    let coarse = integrate(&grid.coarsened())?;
    Ok(IntegralEstimate {
        value,
        coarse,
        flagged: (value - coarse).abs() > tolerance * (grid.hi - grid.lo),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeNode {
    pub energy: f64,
    pub min_norm: f64,
    pub max_norm: f64,
    /// `min_norm < threshold`: a finite-L stand-in for `liminf ||T_E(n)|| < inf`.
    pub bounded: bool,
}

/// Per-node transfer-norm classification over `lengths`.
pub fn sigma_ac_probe(
    model: &JacobiModel,
    grid: &EnergyGrid,
    lengths: &[usize],
    threshold: f64,
) -> Result<Vec<ProbeNode>> {
    grid.validate()?;
    if lengths.is_empty() || lengths.windows(2).any(|w| w[0] >= w[1]) || lengths[0] == 0 {
        return Err(Error::domain("L list must be positive and strictly increasing"));
    }
    let c = model.coefficients(*lengths.last().unwrap())?;
    Ok(grid
        .points()
        .par_iter()
        .map(|&e| {
            let norms: Vec<f64> = sweep_coefficients(&c.a, &c.b, e, lengths)
                .iter()
                .map(|t| t.norm())
                .collect();
            let min_norm = norms.iter().copied().fold(f64::INFINITY, f64::min);
            let max_norm = norms.iter().copied().fold(0.0, f64::max);
            ProbeNode {
                energy: e,
                min_norm,
                max_norm,
                bounded: min_norm < threshold,
            }
        })
        .collect())
}
