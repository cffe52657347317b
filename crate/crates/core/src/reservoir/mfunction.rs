// SPDX-License-Identifier: Apache-2.0

//! Weyl m-functions of periodic half-lines as fixed points of the period Möbius map.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jacobi::PeriodicJacobi;

/// Offset used to pick the Herglotz branch on the real axis.
pub const BRANCH_ETA: f64 = 1e-8;

/// Roots closer than this (relative) are treated as a band edge, where the
/// double root is returned and the value is flagged.
const EDGE_SEPARATION: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// `(-inf, 0]`, anchored at site 0.
    Left,
    /// `[1, inf)`, anchored at site 1.
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MValue {
    pub value: Complex64,
    /// The real-axis evaluation sat on a band edge and was replaced by the value at `E + i BRANCH_ETA`.
    pub regularized: bool,
    /// Relative residual of the fixed-point quadratic.
    pub residual: f64,
}

/// Coefficients `(A, B, C)` of `A m^2 + B m + C = 0` for the right half-line of `per`,
/// and its discriminant.
///
/// The discriminant equals `tr(P)^2 - 4 det(P)` with `det(P) = prod a_k^2`; forming it
/// that way avoids the cancellation in `B^2 - 4AC` when the entries of `P` are large.
fn fixed_point_quadratic(per: &PeriodicJacobi, z: Complex64) -> ([Complex64; 3], Complex64) {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut p = [[one, zero], [zero, one]];
    let mut det = 1.0;
    for (&a, &b) in per.a().iter().zip(per.b()) {
        // p <- p * [[0, 1], [-a^2, b - z]]
        let m10 = Complex64::new(-a * a, 0.0);
        let m11 = Complex64::new(b, 0.0) - z;
        p = [
            [p[0][1] * m10, p[0][0] + p[0][1] * m11],
            [p[1][1] * m10, p[1][0] + p[1][1] * m11],
        ];
        det *= a * a;
        let scale = p.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
        if scale > 0.0 && scale.is_finite() {
            for c in p.iter_mut().flatten() {
                *c /= scale;
            }
            det /= scale * scale;
        }
    }
    let trace = p[0][0] + p[1][1];
    ([p[1][0], p[1][1] - p[0][0], -p[0][1]], trace * trace - 4.0 * det)
}

fn roots([a, b, c]: [Complex64; 3], disc: Complex64) -> (Complex64, Complex64) {
    if a.norm() == 0.0 {
        let r = -c / b;
        return (r, r);
    }
    let disc = disc.sqrt();
    let sign = if (b.conj() * disc).re >= 0.0 { 1.0 } else { -1.0 };
    let q = -0.5 * (b + sign * disc);
    if q.norm() == 0.0 {
        return (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    }
    (q / a, c / q)
}

fn residual([a, b, c]: [Complex64; 3], m: Complex64) -> f64 {
    let scale = a.norm() * m.norm_sqr() + b.norm() * m.norm() + c.norm();
    if scale == 0.0 {
        0.0
    } else {
        (a * m * m + b * m + c).norm() / scale
    }
}

fn upper_root(per: &PeriodicJacobi, z: Complex64) -> (Complex64, f64) {
    let (q, disc) = fixed_point_quadratic(per, z);
    let (r1, r2) = roots(q, disc);
    let m = if r1.im >= r2.im { r1 } else { r2 };
    (m, residual(q, m))
}

/// `<delta_1, (J - z)^{-1} delta_1>` for the right half-line of `per`, `Im z > 0`.
pub(crate) fn right_m(per: &PeriodicJacobi, z: Complex64) -> Complex64 {
    upper_root(per, z).0
}

/// Half-line m-function of `per` at `E + i eta`.
///
/// For `eta = 0` the branch is the one continuous from the upper half-plane; in a
/// gap the value is real.
pub fn m_function(per: &PeriodicJacobi, side: Side, energy: f64, eta: f64) -> Result<MValue> {
    if !(eta >= 0.0) || !energy.is_finite() || !eta.is_finite() {
        return Err(Error::domain(format!("m-function needs finite E and eta >= 0, got {energy}, {eta}")));
    }
    let reflected;
    let oriented = match side {
        Side::Right => per,
        Side::Left => {
            reflected = per.reflected();
            &reflected
        }
    };
    if eta > 0.0 {
        let (value, residual) = upper_root(oriented, Complex64::new(energy, eta));
        return Ok(MValue {
            value,
            regularized: false,
            residual,
        });
    }
    let (q, disc) = fixed_point_quadratic(oriented, Complex64::new(energy, 0.0));
    let (r1, r2) = roots(q, disc);
    if (r1 - r2).norm() <= EDGE_SEPARATION * (1.0 + r1.norm()) {
        let value = Complex64::new(0.5 * (r1.re + r2.re), 0.0);
        return Ok(MValue {
            value,
            regularized: true,
            residual: residual(q, value),
        });
    }
    let (guide, _) = upper_root(oriented, Complex64::new(energy, BRANCH_ETA));
    let mut value = if (r1 - guide).norm() <= (r2 - guide).norm() { r1 } else { r2 };
    if value.im < 0.0 {
        value.im = 0.0;
    }
    Ok(MValue {
        value,
        regularized: false,
        residual: residual(q, value),
    })
}

/// Relative residual of `m` in the fixed-point quadratic of `per` at `z`.
pub fn m_residual(per: &PeriodicJacobi, side: Side, z: Complex64, m: Complex64) -> f64 {
    let (q, _) = match side {
        Side::Right => fixed_point_quadratic(per, z),
        Side::Left => fixed_point_quadratic(&per.reflected(), z),
    };
    residual(q, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::{periodize, JacobiModel};

    fn free() -> PeriodicJacobi {
        periodize(&JacobiModel::free(), 1, 1.0).unwrap()
    }

    #[test]
    fn free_period_at_i() {
        let m = m_function(&free(), Side::Right, 0.0, 1.0).unwrap();
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        assert!((m.value - Complex64::new(0.0, golden)).norm() < 1e-14);
        assert!(m.residual < 1e-14);
    }

    #[test]
    fn half_coupling_at_zero() {
        let per = periodize(&JacobiModel::explicit(vec![], vec![0.0]).unwrap(), 1, 0.5).unwrap();
        let m = m_function(&per, Side::Right, 0.0, 0.0).unwrap();
        assert!((m.value - Complex64::new(0.0, 2.0)).norm() < 1e-12, "{m:?}");
    }

    #[test]
    fn gap_value_is_real_and_continuous() {
        let per = periodize(&JacobiModel::explicit(vec![1.0], vec![1.0, -1.0]).unwrap(), 2, 1.0).unwrap();
        for side in [Side::Left, Side::Right] {
            let m0 = m_function(&per, side, 0.0, 0.0).unwrap();
            assert_eq!(m0.value.im, 0.0);
            assert!(!m0.regularized);
            let near = m_function(&per, side, 0.0, 1e-6).unwrap();
            assert!((m0.value - near.value).norm() < 1e-5);
        }
        // two-step fixed point
        let m = m_function(&per, Side::Right, 0.0, 0.0).unwrap().value.re;
        let inner = 1.0 / (-1.0 - m);
        assert!((m - 1.0 / (1.0 - inner)).abs() < 1e-12);
    }

    #[test]
    fn band_edge_is_regularized() {
        let m = m_function(&free(), Side::Right, 2.0, 0.0).unwrap();
        assert!(m.regularized);
        assert!((m.value - Complex64::new(-1.0, 0.0)).norm() < 1e-7, "{m:?}");
    }

    #[test]
    fn left_uses_reversed_block() {
        let sample = JacobiModel::explicit(vec![0.4, 1.3], vec![0.5, -0.2, 0.1]).unwrap();
        let per = periodize(&sample, 3, 0.8).unwrap();
        let z = Complex64::new(0.3, 0.05);
        let left = m_function(&per, Side::Left, z.re, z.im).unwrap().value;
        // deep continued fraction along sites 0, -1, -2, ...
        let b = [0.1, -0.2, 0.5];
        let a = [1.3, 0.4, 0.8];
        let mut m = Complex64::new(0.0, 0.0);
        for k in (0..3000).rev() {
            m = 1.0 / (b[k % 3] - z - a[k % 3] * a[k % 3] * m);
        }
        assert!((left - m).norm() < 1e-10, "{left} vs {m}");
    }
}
