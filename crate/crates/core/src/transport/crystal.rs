// SPDX-License-Identifier: Apache-2.0

//! Thouless and crystalline currents of periodized samples, and repeated samples.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::landauer::steady_current_with;
use super::spec::{EbbSpec, TransportResult};
use crate::error::{Error, Result};
use crate::jacobi::{discriminant, restrict_repeated, PeriodicJacobi};
use crate::reservoir::{m_function, Lead, Side, SUPPORT_TOLERANCE};
use crate::spectral::quadrature::{band_rule, pairwise_sum, weighted_sum};
use crate::spectral::EnergyGrid;

pub const DEFAULT_BAND_NODES: usize = 400;

fn check_window(window: (f64, f64)) -> Result<()> {
    if !(window.0 < window.1) {
        return Err(Error::domain(format!("window ({}, {}) is empty", window.0, window.1)));
    }
    Ok(())
}

/// `(1 / 2 pi) |sp(J_per) ∩ (mu_l, mu_r)|`.
pub fn thouless_current(per: &PeriodicJacobi, window: (f64, f64)) -> Result<f64> {
    check_window(window)?;
    let bands = per.bands_in(window.0, window.1)?;
    Ok(pairwise_sum(&bands.iter().map(|(s, t)| t - s).collect::<Vec<_>>()) / (2.0 * PI))
}

fn mismatch(inner: Complex64, outer: Complex64) -> f64 {
    (inner - outer).norm_sqr() / (inner.im * outer.im)
}

/// Transmittance of the infinitely repeated sample at energy `E`.
///
/// Zero outside the interior of the bands and outside either lead's ac support.
pub fn crystalline_transmittance(per: &PeriodicJacobi, left: &Lead, right: &Lead, coupling: f64, energy: f64) -> Result<f64> {
    if coupling == 0.0 || !(discriminant(per, energy).abs() < 2.0) {
        return Ok(0.0);
    }
    let f_l = left.borel(energy)?;
    let f_r = right.borel(energy)?;
    if !(f_l.im > SUPPORT_TOLERANCE && f_r.im > SUPPORT_TOLERANCE) {
        return Ok(0.0);
    }
    let m_l = m_function(per, Side::Left, energy, 0.0)?;
    let m_r = m_function(per, Side::Right, energy, 0.0)?;
    if m_l.regularized || m_r.regularized {
        return Ok(0.0);
    }
    let s2 = per.coupling() * per.coupling();
    let lam2 = coupling * coupling;
    let (x_l, x_r) = (s2 * m_l.value, s2 * m_r.value);
    if !(x_l.im > 0.0 && x_r.im > 0.0) {
        return Err(Error::Inconsistent {
            energy,
            what: format!("m-functions {} and {} not in the upper half-plane inside a band", m_l.value, m_r.value),
        });
    }
    let bracket = 0.25 * (mismatch(x_r, lam2 * f_r) + mismatch(x_l, lam2 * f_l));
    Ok(1.0 / (1.0 + bracket))
}

/// `(1 / 2 pi) int D^Cr(E) dE` over the bands inside the window, `band_nodes` per band.
pub fn crystalline_current(
    per: &PeriodicJacobi,
    left: &Lead,
    right: &Lead,
    coupling: f64,
    window: (f64, f64),
    band_nodes: usize,
) -> Result<f64> {
    check_window(window)?;
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for (s, t) in per.bands_in(window.0, window.1)? {
        let (x, w) = band_rule(s, t, band_nodes);
        nodes.extend(x);
        weights.extend(w);
    }
    let values = nodes
        .par_iter()
        .map(|&e| crystalline_transmittance(per, left, right, coupling, e))
        .collect::<Result<Vec<f64>>>()?;
    Ok(weighted_sum(&weights, &values) / (2.0 * PI))
}

/// Landauer-Büttiker current of `N` copies of the period block between the leads.
pub fn repeated_sample_current(
    per: &PeriodicJacobi,
    left: &Lead,
    right: &Lead,
    coupling: f64,
    copies: usize,
    grid: &EnergyGrid,
) -> Result<TransportResult> {
    let sample = restrict_repeated(per, copies)?
        .all_coefficients()
        .expect("repeated sample is an explicit list");
    let spec = EbbSpec {
        sample,
        left: left.clone(),
        right: right.clone(),
        coupling,
        grid: grid.clone(),
    };
    steady_current_with(&spec, super::landauer::DEFAULT_REFINEMENT_TOLERANCE)
}

/// Currents for `N = 1..=n_max` and their running means `(1/N) sum_{n<=N} J^(n)`.
pub fn repeated_currents(
    per: &PeriodicJacobi,
    left: &Lead,
    right: &Lead,
    coupling: f64,
    n_max: usize,
    grid: &EnergyGrid,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let currents = (1..=n_max)
        .map(|n| repeated_sample_current(per, left, right, coupling, n, grid).map(|r| r.current))
        .collect::<Result<Vec<f64>>>()?;
    let mut means = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        means.push(pairwise_sum(&currents[..n]) / n as f64);
    }
    Ok((currents, means))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::{periodize, JacobiModel};
    use crate::transport::landauer::steady_current;

    fn period_two() -> PeriodicJacobi {
        periodize(&JacobiModel::explicit(vec![1.0], vec![1.0, -1.0]).unwrap(), 2, 1.0).unwrap()
    }

    fn free_per() -> PeriodicJacobi {
        periodize(&JacobiModel::free(), 1, 1.0).unwrap()
    }

    #[test]
    fn thouless_examples() {
        assert!((thouless_current(&free_per(), (-1.0, 1.0)).unwrap() - 1.0 / PI).abs() < 1e-12);
        assert_eq!(thouless_current(&period_two(), (-1.0, 1.0)).unwrap(), 0.0);
        assert!((thouless_current(&period_two(), (0.0, 2.0)).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-8);
        assert!(thouless_current(&period_two(), (1.0, 0.0)).is_err());
    }

    #[test]
    fn matched_leads_are_reflectionless() {
        let per = period_two();
        let left = Lead::periodic(per.clone(), Side::Left);
        let right = Lead::periodic(per.clone(), Side::Right);
        for e in [1.1, 1.5, 2.1, -1.3, -2.2] {
            let d = crystalline_transmittance(&per, &left, &right, 1.0, e).unwrap();
            assert!((d - 1.0).abs() < 1e-10, "E={e}: {d}");
        }
        assert_eq!(crystalline_transmittance(&per, &left, &right, 1.0, 0.0).unwrap(), 0.0);
        let jc = crystalline_current(&per, &left, &right, 1.0, (-3.0, 3.0), DEFAULT_BAND_NODES).unwrap();
        let jt = thouless_current(&per, (-3.0, 3.0)).unwrap();
        assert!((jc - jt).abs() < 1e-8);
    }

    #[test]
    fn wide_band_leads_on_free_period() {
        // m = (-E + i sqrt(4 - E^2)) / 2, F = i
        let per = free_per();
        let lead = Lead::wide_band(1.0).unwrap();
        let d0 = crystalline_transmittance(&per, &lead, &lead, 1.0, 0.0).unwrap();
        assert!((d0 - 1.0).abs() < 1e-12);
        let d1 = crystalline_transmittance(&per, &lead, &lead, 1.0, 1.0).unwrap();
        assert!((d1 - 3f64.sqrt() / 2.0).abs() < 1e-12, "{d1}");
    }

    #[test]
    fn gap_window_is_zero() {
        let per = period_two();
        let lead = Lead::FreeHalfLine;
        assert_eq!(crystalline_current(&per, &lead, &lead, 1.0, (-0.9, 0.9), 100).unwrap(), 0.0);
    }

    #[test]
    fn one_copy_is_the_base_sample() {
        let per = periodize(&JacobiModel::anderson(2.0, 4).unwrap(), 5, 0.6).unwrap();
        let grid = EnergyGrid::new(-1.0, 1.0, 500).unwrap();
        let lead = Lead::FreeHalfLine;
        let rep = repeated_sample_current(&per, &lead, &lead, 0.9, 1, &grid).unwrap();
        let base = EbbSpec::from_model(&JacobiModel::anderson(2.0, 4).unwrap(), 5, lead.clone(), lead.clone(), 0.9, (-1.0, 1.0))
            .unwrap()
            .with_grid(grid.clone())
            .unwrap();
        assert_eq!(rep.current, steady_current(&base).unwrap().current);
        assert_eq!(repeated_sample_current(&per, &lead, &lead, 0.0, 3, &grid).unwrap().current, 0.0);
    }
}
