// SPDX-License-Identifier: Apache-2.0

//! Landauer-Büttiker transmittance and steady current via a Schur complement onto the sample.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::spec::{EbbSpec, TransportMetadata, TransportResult};
use crate::error::Result;
use crate::spectral::quadrature::weighted_sum;

/// Transmittances above `1 + CLIP_TOLERANCE` are reported.
pub const CLIP_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_REFINEMENT_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transmittance {
    /// Clipped to `[0, 1]`.
    pub value: f64,
    pub raw: f64,
    /// `raw > 1 + CLIP_TOLERANCE`.
    pub warning: bool,
}

/// `ln |G_1L|` and the phase of `G_1L` for `K = J_L - z - s_l P_1 - s_r P_L`.
fn green_corner(a: &[f64], b: &[f64], z: Complex64, s_l: Complex64, s_r: Complex64) -> (f64, Complex64) {
    let l = b.len();
    let diag = |k: usize| {
        let mut d = b[k] - z;
        if k == 0 {
            d -= s_l;
        }
        if k == l - 1 {
            d -= s_r;
        }
        d
    };
    let mut r = diag(0);
    let mut log_mod = 0.0;
    let mut phase = Complex64::new(1.0, 0.0);
    for k in 1..l {
        let ratio = -a[k - 1] / r;
        log_mod += ratio.norm().ln();
        phase *= ratio / ratio.norm();
        r = diag(k) - a[k - 1] * a[k - 1] / r;
    }
    let last = 1.0 / r;
    log_mod += last.norm().ln();
    phase *= last / last.norm();
    (log_mod, phase)
}

/// `<delta_1, (J_L - z - lambda^2 F_l P_1 - lambda^2 F_r P_L)^{-1} delta_L>`, `z = E + i eta`.
///
/// Non-finite when the effective matrix is singular, which can only happen at
/// `eta = 0` outside both lead supports.
pub fn effective_green(spec: &EbbSpec, energy: f64, eta: f64) -> Result<Complex64> {
    let lam2 = spec.coupling * spec.coupling;
    let s_l = lam2 * spec.left.borel_at(energy, eta)?;
    let s_r = lam2 * spec.right.borel_at(energy, eta)?;
    let (log_mod, phase) = green_corner(&spec.sample.a, &spec.sample.b, Complex64::new(energy, eta), s_l, s_r);
    Ok(phase * log_mod.exp())
}

/// `D(L, E) = 4 lambda^4 |G_1L|^2 Im F_l Im F_r` at `E + i0`.
pub fn lb_transmittance(spec: &EbbSpec, energy: f64) -> Result<Transmittance> {
    let zero = Transmittance {
        value: 0.0,
        raw: 0.0,
        warning: false,
    };
    if spec.coupling == 0.0 {
        return Ok(zero);
    }
    let f_l = spec.left.borel(energy)?;
    let f_r = spec.right.borel(energy)?;
    if !(f_l.im > 0.0 && f_r.im > 0.0) {
        return Ok(zero);
    }
    let lam2 = spec.coupling * spec.coupling;
    let (log_mod, _) = green_corner(&spec.sample.a, &spec.sample.b, Complex64::new(energy, 0.0), lam2 * f_l, lam2 * f_r);
    let raw = 4.0 * lam2 * lam2 * (2.0 * log_mod).exp() * f_l.im * f_r.im;
    Ok(Transmittance {
        value: raw.clamp(0.0, 1.0),
        raw,
        warning: raw > 1.0 + CLIP_TOLERANCE,
    })
}

/// `D(L, mu) / 2 pi`.
pub fn linear_response(spec: &EbbSpec, mu: f64) -> Result<f64> {
    Ok(lb_transmittance(spec, mu)?.value / (2.0 * PI))
}

/// `(1 / 2 pi) int_{mu_l}^{mu_r} D(L, E) dE` on the spec's grid.
pub fn steady_current(spec: &EbbSpec) -> Result<TransportResult> {
    steady_current_with(spec, DEFAULT_REFINEMENT_TOLERANCE)
}

pub fn steady_current_with(spec: &EbbSpec, refinement_tolerance: f64) -> Result<TransportResult> {
    spec.validate()?;
    let mut warnings = Vec::new();
    for (name, lead) in [("left", &spec.left), ("right", &spec.right)] {
        if !lead.ac_support_contains(&spec.grid)? {
            warnings.push(format!("{name} lead has no ac spectrum somewhere in the window"));
        }
    }
    let (energies, weights) = spec.grid.points_and_weights();
    let samples = energies
        .par_iter()
        .map(|&e| lb_transmittance(spec, e))
        .collect::<Result<Vec<_>>>()?;
    if let Some((e, t)) = energies.iter().zip(&samples).find(|(_, t)| t.warning) {
        warnings.push(format!("transmittance {} exceeds 1 at E = {e}", t.raw));
    }
    let transmittance: Vec<f64> = samples.iter().map(|t| t.value).collect();
    let current = weighted_sum(&weights, &transmittance) / (2.0 * PI);

    let coarse_grid = spec.grid.coarsened();
    let (ce, cw) = coarse_grid.points_and_weights();
    let coarse_values = ce
        .par_iter()
        .map(|&e| lb_transmittance(spec, e).map(|t| t.value))
        .collect::<Result<Vec<_>>>()?;
    let coarse_current = weighted_sum(&cw, &coarse_values) / (2.0 * PI);
    if (current - coarse_current).abs() > refinement_tolerance {
        warnings.push(format!(
            "grid refinement changed the current by {:.3e}",
            (current - coarse_current).abs()
        ));
    }
    Ok(TransportResult {
        energies,
        transmittance,
        current,
        metadata: TransportMetadata {
            spec_hash: spec.hash(),
            grid: spec.grid.clone(),
            eta: 0.0,
            refinement_tolerance,
            coarse_current,
            warnings,
        },
    })
}
