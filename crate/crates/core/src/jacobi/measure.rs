// SPDX-License-Identifier: Apache-2.0

//! Finitely supported probability measures and their Jacobi parameters.

use serde::{Deserialize, Serialize};

use super::model::{JacobiModel, DEFAULT_BOUND};
use crate::error::{Error, Result};

const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

/// `nu = sum_i w_i delta_{x_i}` with strictly increasing points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure")]
pub struct DiscreteMeasure {
    points: Vec<f64>,
    weights: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeasure {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl TryFrom<RawMeasure> for DiscreteMeasure {
    type Error = Error;

    fn try_from(raw: RawMeasure) -> Result<Self> {
        DiscreteMeasure::new(raw.points, raw.weights)
    }
}

impl DiscreteMeasure {
    pub fn new(points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::domain(format!(
                "measure needs matching non-empty points/weights, got {} and {}",
                points.len(),
                weights.len()
            )));
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("support points must be finite"));
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::domain("support points must be strictly increasing"));
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::domain("weights must be positive"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::domain(format!("weights sum to {total}, expected 1")));
        }
        Ok(DiscreteMeasure { points, weights })
    }

    /// Sorts the atoms and rescales the weights to total mass one.
    pub fn normalized(points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::domain("points and weights differ in length"));
        }
        let mut atoms: Vec<(f64, f64)> = points.into_iter().zip(weights).collect();
        atoms.sort_by(|x, y| x.0.total_cmp(&y.0));
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        let (points, weights) = atoms.into_iter().map(|(x, w)| (x, w / total)).unzip();
        Self::new(points, weights)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Jacobi parameters of the orthonormal polynomials of `nu`.
///
/// Runs the Stieltjes recurrence on the vectors `q_n(x_i) = sqrt(w_i) p_n(x_i)`:
/// `b_{n+1} = <x q_n, q_n>`, `a_{n+1} q_{n+1} = x q_n - b_{n+1} q_n - a_n q_{n-1}`.
/// Each new vector is re-orthogonalized against all previous ones, which keeps the
/// discrete inner products exact to rounding even when the recurrence reaches the
/// number of atoms.
pub fn measure_to_jacobi(measure: &DiscreteMeasure, n_max: usize) -> Result<JacobiModel> {
    let k = measure.len();
    if n_max == 0 {
        return Err(Error::domain("n_max must be at least 1"));
    }
    if n_max > k {
        return Err(Error::RankDeficient {
            points: k,
            requested: n_max,
        });
    }
    let x = measure.points();
    let scale = x.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n_max);
    basis.push(measure.weights().iter().map(|w| w.sqrt()).collect());
    let mut a = Vec::with_capacity(n_max.saturating_sub(1));
    let mut b = Vec::with_capacity(n_max);

    for n in 0..n_max {
        let q = &basis[n];
        let bn: f64 = q.iter().zip(x).map(|(qi, xi)| xi * qi * qi).sum();
        b.push(bn);
        if n + 1 == n_max {
            break;
        }
        let mut r: Vec<f64> = q.iter().zip(x).map(|(qi, xi)| (xi - bn) * qi).collect();
        if n > 0 {
            let an = a[n - 1];
            for (ri, pi) in r.iter_mut().zip(&basis[n - 1]) {
                *ri -= an * pi;
            }
        }
        for _ in 0..2 {
            for prev in &basis {
                let proj: f64 = r.iter().zip(prev).map(|(u, v)| u * v).sum();
                for (ri, pi) in r.iter_mut().zip(prev) {
                    *ri -= proj * pi;
                }
            }
        }
        let norm2: f64 = r.iter().map(|v| v * v).sum();
        if !(norm2 > (1e-13 * scale).powi(2)) {
            return Err(Error::Breakdown {
                index: n + 1,
                value: norm2,
            });
        }
        let norm = norm2.sqrt();
        a.push(norm);
        basis.push(r.into_iter().map(|v| v / norm).collect());
    }
    JacobiModel::explicit_with_bound(a, b, DEFAULT_BOUND.max(2.0 * scale + 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_symmetric_atoms() {
        let nu = DiscreteMeasure::new(vec![-1.0, 1.0], vec![0.5, 0.5]).unwrap();
        let c = measure_to_jacobi(&nu, 2).unwrap().all_coefficients().unwrap();
        assert!((c.a[0] - 1.0).abs() < 1e-15);
        assert!(c.b.iter().all(|b| b.abs() < 1e-15));
    }

    #[test]
    fn single_atom() {
        let nu = DiscreteMeasure::new(vec![0.7], vec![1.0]).unwrap();
        let c = measure_to_jacobi(&nu, 1).unwrap().all_coefficients().unwrap();
        assert!(c.a.is_empty());
        assert_eq!(c.b, vec![0.7]);
    }

    #[test]
    fn uniform_on_three_points() {
        let w = 1.0 / 3.0;
        let nu = DiscreteMeasure::normalized(vec![-1.0, 0.0, 1.0], vec![w, w, w]).unwrap();
        let c = measure_to_jacobi(&nu, 2).unwrap().all_coefficients().unwrap();
        assert!(c.b[0].abs() < 1e-15);
        assert!((c.a[0] - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((c.a[0] - 0.8165).abs() < 1e-4);
    }

    #[test]
    fn rank_deficiency_is_reported() {
        let nu = DiscreteMeasure::new(vec![-1.0, 1.0], vec![0.5, 0.5]).unwrap();
        assert!(matches!(
            measure_to_jacobi(&nu, 3),
            Err(Error::RankDeficient { points: 2, requested: 3 })
        ));
    }

    #[test]
    fn nearly_coincident_atoms_break_down() {
        let nu = DiscreteMeasure::new(vec![0.0, 1e-15, 1.0], vec![0.3, 0.3, 0.4]).unwrap();
        assert!(matches!(measure_to_jacobi(&nu, 3), Err(Error::Breakdown { .. })));
    }

    #[test]
    fn invalid_measures() {
        assert!(DiscreteMeasure::new(vec![1.0, 0.0], vec![0.5, 0.5]).is_err());
        assert!(DiscreteMeasure::new(vec![0.0, 0.0], vec![0.5, 0.5]).is_err());
        assert!(DiscreteMeasure::new(vec![0.0, 1.0], vec![0.5, 0.6]).is_err());
        assert!(DiscreteMeasure::new(vec![0.0, 1.0], vec![1.0, 0.0]).is_err());
        let json = r#"{"points":[0.0,1.0],"weights":[0.25,0.75]}"#;
        let nu: DiscreteMeasure = serde_json::from_str(json).unwrap();
        assert_eq!(nu.weights(), &[0.25, 0.75]);
        assert!(serde_json::from_str::<DiscreteMeasure>(r#"{"points":[1.0,0.0],"weights":[0.5,0.5]}"#).is_err());
    }
}
