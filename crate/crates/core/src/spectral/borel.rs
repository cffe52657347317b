// SPDX-License-Identifier: Apache-2.0

//! Borel (Stieltjes) transforms of measures, Jacobi models and periodic half-lines.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jacobi::{DiscreteMeasure, JacobiModel, PeriodicJacobi};
use crate::reservoir::mfunction::right_m;

pub const DEFAULT_DEPTH: usize = 10_000;
pub const DEFAULT_DEPTH_TOLERANCE: f64 = 1e-6;

/// How the continued fraction is closed at the truncation depth.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tail {
    /// Self-similar for models with an exact period, zero otherwise.
    #[default]
    Auto,
    Zero,
    SelfSimilar,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BorelTransform {
    pub depth: usize,
    #[serde(default)]
    pub tail: Tail,
    /// Allowed change between depth `d` and `d / 2` before the result is flagged.
    pub tolerance: f64,
}

impl Default for BorelTransform {
    fn default() -> Self {
        BorelTransform {
            depth: DEFAULT_DEPTH,
            tail: Tail::Auto,
            tolerance: DEFAULT_DEPTH_TOLERANCE,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum BorelSource<'a> {
    Measure(&'a DiscreteMeasure),
    Model(&'a JacobiModel),
    /// Right half-line `[1, inf)` of a periodic operator.
    Periodic(&'a PeriodicJacobi),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BorelValue {
    pub value: Complex64,
    pub depth_warning: bool,
}

/// `F(z)` with default settings.
pub fn borel_transform(source: BorelSource<'_>, z: Complex64) -> Result<Complex64> {
    BorelTransform::default().evaluate(source, z).map(|v| v.value)
}

/// `1 / (b_1 - z - a_1^2 / (b_2 - z - ...))` over `b.len()` levels, closed by `tail`.
pub fn continued_fraction(a: &[f64], b: &[f64], z: Complex64, tail: Complex64) -> Complex64 {
    let mut m = tail;
    for k in (0..b.len()).rev() {
        let a2 = a.get(k).map_or(0.0, |x| x * x);
        m = 1.0 / (b[k] - z - a2 * m);
    }
    m
}

impl BorelTransform {
    pub fn with_depth(mut self, depth: usize) -> Self {
        self.depth = depth;
        self
    }

    pub fn with_tail(mut self, tail: Tail) -> Self {
        self.tail = tail;
        self
    }

    pub fn evaluate(&self, source: BorelSource<'_>, z: Complex64) -> Result<BorelValue> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::domain(format!("non-finite argument {z}")));
        }
        match source {
            BorelSource::Measure(nu) => {
                if z.im < 0.0 {
                    return Err(Error::domain(format!("Im z must be non-negative, got {z}")));
                }
                if z.im == 0.0 && nu.points().contains(&z.re) {
                    return Err(Error::domain(format!("z = {} lies on the support", z.re)));
                }
                let terms: Vec<Complex64> = nu
                    .points()
                    .iter()
                    .zip(nu.weights())
                    .map(|(&x, &w)| w / (x - z))
                    .collect();
                Ok(BorelValue {
                    value: complex_pairwise(&terms),
                    depth_warning: false,
                })
            }
            BorelSource::Periodic(per) => {
                if !(z.im > 0.0) {
                    return Err(Error::domain(format!("Im z must be positive, got {z}")));
                }
                Ok(BorelValue {
                    value: right_m(per, z),
                    depth_warning: false,
                })
            }
            BorelSource::Model(model) => self.model_value(model, z),
        }
    }

    fn model_value(&self, model: &JacobiModel, z: Complex64) -> Result<BorelValue> {
        if !(z.im > 0.0) {
            return Err(Error::domain(format!("Im z must be positive, got {z}")));
        }
        let period = match self.tail {
            Tail::Zero => None,
            Tail::Auto => model.period(),
            Tail::SelfSimilar => Some(model.period().ok_or_else(|| {
                Error::domain("self-similar tail needs a model with an exact period")
            })?),
        };
        if let Some(per) = period {
            return Ok(BorelValue {
                value: right_m(&per, z),
                depth_warning: false,
            });
        }
        if self.depth == 0 {
            return Err(Error::domain("continued-fraction depth must be positive"));
        }
        let zero = Complex64::new(0.0, 0.0);
        if let Some(c) = model.all_coefficients() {
            if c.b.len() <= self.depth {
                return Ok(BorelValue {
                    value: continued_fraction(&c.a, &c.b, z, zero),
                    depth_warning: false,
                });
            }
        }
        let c = model.coefficients(self.depth)?;
        let full = continued_fraction(&c.a, &c.b, z, zero);
        let half = (self.depth / 2).max(1);
        let coarse = continued_fraction(&c.a[..half], &c.b[..half], z, zero);
        let depth_warning = (full - coarse).norm() > self.tolerance * full.norm().max(1.0);
        Ok(BorelValue {
            value: full,
            depth_warning,
        })
    }
}

pub(crate) fn complex_pairwise(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let (l, r) = xs.split_at(xs.len() / 2);
    complex_pairwise(l) + complex_pairwise(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::measure_to_jacobi;

    const I: Complex64 = Complex64::new(0.0, 1.0);

    #[test]
    fn one_site_model() {
        let m = JacobiModel::explicit(vec![], vec![0.0]).unwrap();
        let f = borel_transform(BorelSource::Model(&m), I).unwrap();
        assert!((f - I).norm() < 1e-15);
    }

    #[test]
    fn free_model_at_i() {
        let f = borel_transform(BorelSource::Model(&JacobiModel::free()), I).unwrap();
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        assert!((f - golden * I).norm() < 1e-14);
        // zero tail converges to the same value at i
        let zero = BorelTransform::default().with_tail(Tail::Zero);
        let v = zero.evaluate(BorelSource::Model(&JacobiModel::free()), I).unwrap();
        assert!((v.value - golden * I).norm() < 1e-12);
        assert!(!v.depth_warning);
    }

    #[test]
    fn symmetric_two_point_measure() {
        let nu = DiscreteMeasure::new(vec![-1.0, 1.0], vec![0.5, 0.5]).unwrap();
        let f = borel_transform(BorelSource::Measure(&nu), I).unwrap();
        assert!((f - 0.5 * I).norm() < 1e-15);
        // real z off the support is allowed for measures
        let f = borel_transform(BorelSource::Measure(&nu), Complex64::new(0.0, 0.0)).unwrap();
        assert!(f.norm() < 1e-15);
        assert!(borel_transform(BorelSource::Measure(&nu), Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn model_needs_upper_half_plane() {
        let m = JacobiModel::free();
        assert!(borel_transform(BorelSource::Model(&m), Complex64::new(0.0, 0.0)).is_err());
        assert!(borel_transform(BorelSource::Model(&m), Complex64::new(0.0, -1.0)).is_err());
        let t = BorelTransform::default().with_tail(Tail::SelfSimilar);
        let a = JacobiModel::anderson(3.0, 7).unwrap();
        assert!(t.evaluate(BorelSource::Model(&a), I).is_err());
    }

    #[test]
    fn measure_and_its_jacobi_matrix_agree() {
        let nu = DiscreteMeasure::new(vec![-1.5, -0.2, 0.4, 2.0], vec![0.1, 0.4, 0.3, 0.2]).unwrap();
        let j = measure_to_jacobi(&nu, 4).unwrap();
        for z in [I, Complex64::new(0.3, 0.01), Complex64::new(-4.0, 2.0)] {
            let a = borel_transform(BorelSource::Measure(&nu), z).unwrap();
            let b = borel_transform(BorelSource::Model(&j), z).unwrap();
            assert!((a - b).norm() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn shallow_depth_is_flagged() {
        let t = BorelTransform::default().with_depth(8).with_tail(Tail::Zero);
        let v = t
            .evaluate(BorelSource::Model(&JacobiModel::free()), Complex64::new(0.0, 1e-3))
            .unwrap();
        assert!(v.depth_warning);
    }

    #[test]
    fn normalization_at_large_z() {
        let nu = DiscreteMeasure::new(vec![-1.0, 0.5, 3.0], vec![0.2, 0.5, 0.3]).unwrap();
        let z = Complex64::new(0.0, 1e6);
        let f = borel_transform(BorelSource::Measure(&nu), z).unwrap();
        assert!((-z * f - 1.0).norm() < 1e-5);
    }
}
