// SPDX-License-Identifier: Apache-2.0

//! Periodic Jacobi operators built from a finite sample, and their band structure.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::model::{Coefficients, JacobiModel};
use super::transfer::{transfer_product, ScaledMatrix2};
use crate::error::{Error, Result};

/// Root tolerance for band edges.
pub const BAND_EDGE_TOLERANCE: f64 = 1e-10;
/// Band measure is accepted once a grid refinement changes it by less than this.
pub const BAND_MEASURE_TOLERANCE: f64 = 1e-8;

/// Period-`L` operator with `a_{x+nL} = a_x`, `b_{x+nL} = b_x` and `a_L` set by
/// the internal coupling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PeriodicDocument", into = "PeriodicDocument")]
pub struct PeriodicJacobi {
    a: Vec<f64>,
    b: Vec<f64>,
    coupling: f64,
}

/// Serialized as the sample couplings `a_1..a_{L-1}`, the diagonal `b_1..b_L`
/// and the internal coupling.
#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicDocument {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub coupling: f64,
}

impl TryFrom<PeriodicDocument> for PeriodicJacobi {
    type Error = Error;

    fn try_from(doc: PeriodicDocument) -> Result<Self> {
        let sites = doc.b.len();
        if sites == 0 || doc.a.len() + 1 != sites {
            return Err(Error::domain(format!(
                "periodic block needs L diagonal and L - 1 off-diagonal entries, got {} and {}",
                doc.b.len(),
                doc.a.len()
            )));
        }
        let sample = JacobiModel::explicit(doc.a, doc.b)?;
        periodize(&sample, sites, doc.coupling)
    }
}

impl From<PeriodicJacobi> for PeriodicDocument {
    fn from(p: PeriodicJacobi) -> Self {
        let l = p.period();
        PeriodicDocument {
            a: p.a[..l - 1].to_vec(),
            b: p.b,
            coupling: p.coupling,
        }
    }
}

impl PeriodicJacobi {
    /// `a` holds all `L` couplings including `a_L`.
    pub(crate) fn from_parts(a: Vec<f64>, b: Vec<f64>, coupling: f64) -> Self {
        debug_assert_eq!(a.len(), b.len());
        PeriodicJacobi { a, b, coupling }
    }

    pub fn period(&self) -> usize {
        self.b.len()
    }

    /// `a_1..a_L`; the last entry is `|lambda_S|`.
    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// The internal coupling `lambda_S` as given.
    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    /// One-period transfer matrix `A_E(L) ... A_E(1)`.
    pub fn monodromy(&self, energy: f64) -> ScaledMatrix2 {
        transfer_product(&self.a, &self.b, energy).expect("periodic couplings are positive")
    }

    /// Parameters seen from the left half-line `(-inf, 0]`, read outward from site 0.
    pub fn reflected(&self) -> PeriodicJacobi {
        let l = self.period();
        let mut b = self.b.clone();
        b.reverse();
        let mut a: Vec<f64> = self.a[..l - 1].iter().rev().copied().collect();
        a.push(self.a[l - 1]);
        PeriodicJacobi {
            a,
            b,
            coupling: self.coupling,
        }
    }

    /// The same operator with the origin moved `k` sites to the right.
    pub fn shifted(&self, k: usize) -> PeriodicJacobi {
        let k = k % self.period();
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        a.rotate_left(k);
        b.rotate_left(k);
        PeriodicJacobi {
            a,
            b,
            coupling: self.coupling,
        }
    }

    /// First `n` parameters of the half-line `[1, inf)` restriction.
    pub fn half_line(&self, n: usize) -> Coefficients {
        let l = self.period();
        Coefficients {
            a: (0..n).map(|i| self.a[i % l]).collect(),
            b: (0..n).map(|i| self.b[i % l]).collect(),
        }
    }

    pub fn in_spectrum(&self, energy: f64) -> bool {
        discriminant(self, energy).abs() <= 2.0
    }

    /// `sp(J_per)` intersected with `(lo, hi)`, as disjoint sorted intervals.
    pub fn bands_in(&self, lo: f64, hi: f64) -> Result<Vec<(f64, f64)>> {
        if !(lo < hi) {
            return Err(Error::domain(format!("empty window ({lo}, {hi})")));
        }
        let l = self.period();
        let mut nodes = 256.max(32 * l);
        let mut previous: Option<f64> = None;
        let mut best = Vec::new();
        for _ in 0..10 {
            let segments = self.bands_on_grid(lo, hi, nodes);
            let measure: f64 = segments.iter().map(|(s, t)| t - s).sum();
            if let Some(p) = previous {
                if (measure - p).abs() <= BAND_MEASURE_TOLERANCE {
                    return Ok(segments);
                }
            }
            previous = Some(measure);
            best = segments;
            nodes *= 2;
        }
        Ok(best)
    }

    fn bands_on_grid(&self, lo: f64, hi: f64, nodes: usize) -> Vec<(f64, f64)> {
        let step = (hi - lo) / nodes as f64;
        let energies: Vec<f64> = (0..=nodes).map(|i| lo + step * i as f64).collect();
        let values: Vec<f64> = energies.par_iter().map(|&e| discriminant(self, e)).collect();
        let mut cuts = vec![lo, hi];
        for level in [2.0, -2.0] {
            for i in 0..nodes {
                let (f0, f1) = (values[i] - level, values[i + 1] - level);
                if f0 == 0.0 {
                    cuts.push(energies[i]);
                } else if f0.signum() != f1.signum() && f1 != 0.0 {
                    cuts.push(self.bisect(energies[i], energies[i + 1], level));
                }
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut bands: Vec<(f64, f64)> = Vec::new();
        for w in cuts.windows(2) {
            let (s, t) = (w[0], w[1]);
            if !(t > s) || !self.in_spectrum(0.5 * (s + t)) {
                continue;
            }
            match bands.last_mut() {
                Some(last) if last.1 == s => last.1 = t,
                _ => bands.push((s, t)),
            }
        }
        bands
    }

    fn bisect(&self, mut lo: f64, mut hi: f64, level: f64) -> f64 {
        let sign_lo = (discriminant(self, lo) - level).signum();
        while hi - lo > BAND_EDGE_TOLERANCE {
            let mid = 0.5 * (lo + hi);
            if (discriminant(self, mid) - level).signum() == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Builds the period-`L` operator from `a_1..a_{L-1}`, `b_1..b_L` of `sample` and
/// `a_L = lambda_S`.
///
/// A negative `lambda_S` is stored as `|lambda_S|`: on the whole line the sign of a
/// single coupling is removed by a gauge transformation, and every formula that
/// uses the internal coupling itself only sees `lambda_S^2`.
pub fn periodize(sample: &JacobiModel, period: usize, coupling: f64) -> Result<PeriodicJacobi> {
    if period == 0 {
        return Err(Error::domain("period must be at least 1"));
    }
    if coupling == 0.0 || !coupling.is_finite() {
        return Err(Error::domain(format!("internal coupling must be non-zero, got {coupling}")));
    }
    let c = sample.restrict(period)?;
    let mut a = c.a;
    a.push(coupling.abs());
    Ok(PeriodicJacobi {
        a,
        b: c.b,
        coupling,
    })
}

/// `J_L^{(N)}`: `N` copies of the period block on `NL` sites, Dirichlet at both ends.
pub fn restrict_repeated(per: &PeriodicJacobi, copies: usize) -> Result<JacobiModel> {
    if copies == 0 {
        return Err(Error::domain("need at least one copy"));
    }
    let sites = copies * per.period();
    let c = per.half_line(sites);
    let bound = c
        .a
        .iter()
        .chain(&c.b)
        .fold(super::model::DEFAULT_BOUND, |m, x| m.max(2.0 * x.abs()));
    JacobiModel::explicit_with_bound(c.a[..sites - 1].to_vec(), c.b, bound)
}

/// `Delta(E)`, the trace of the one-period transfer matrix. `sp(J_per) = {|Delta| <= 2}`.
pub fn discriminant(per: &PeriodicJacobi, energy: f64) -> f64 {
    per.monodromy(energy).trace()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn period_two() -> PeriodicJacobi {
        let sample = JacobiModel::explicit(vec![1.0], vec![1.0, -1.0]).unwrap();
        periodize(&sample, 2, 1.0).unwrap()
    }

    #[test]
    fn periodize_examples() {
        let p = periodize(&JacobiModel::free(), 1, 1.0).unwrap();
        assert_eq!((p.a(), p.b()), (&[1.0][..], &[0.0][..]));
        let p = periodize(&JacobiModel::free(), 3, 0.5).unwrap();
        assert_eq!((p.a(), p.b()), (&[1.0, 1.0, 0.5][..], &[0.0, 0.0, 0.0][..]));
        let p = period_two();
        assert_eq!((p.a(), p.b()), (&[1.0, 1.0][..], &[1.0, -1.0][..]));
        assert!(periodize(&JacobiModel::free(), 2, 0.0).is_err());
        assert!(periodize(&JacobiModel::free(), 0, 1.0).is_err());
    }

    #[test]
    fn restrict_repeated_examples() {
        let c = restrict_repeated(&period_two(), 3).unwrap().all_coefficients().unwrap();
        assert_eq!(c.b, vec![1.0, -1.0, 1.0, -1.0, 1.0, -1.0]);
        assert_eq!(c.a, vec![1.0; 5]);

        let free = periodize(&JacobiModel::free(), 1, 1.0).unwrap();
        let c = restrict_repeated(&free, 5).unwrap().all_coefficients().unwrap();
        assert_eq!((c.a.len(), c.b.len()), (4, 5));

        let per = periodize(&JacobiModel::anderson(3.0, 1).unwrap(), 4, 0.3).unwrap();
        let single = restrict_repeated(&per, 1).unwrap().all_coefficients().unwrap();
        assert_eq!(single, JacobiModel::anderson(3.0, 1).unwrap().restrict(4).unwrap());
    }

    #[test]
    fn discriminant_examples() {
        let free = periodize(&JacobiModel::free(), 1, 1.0).unwrap();
        let half = periodize(&JacobiModel::explicit(vec![0.5], vec![0.0]).unwrap(), 1, 0.5).unwrap();
        let two = period_two();
        for e in [-2.5, -1.0, 0.0, 0.3, 1.7, 3.0] {
            assert!((discriminant(&free, e) - e).abs() < 1e-14);
            assert!((discriminant(&half, e) - 2.0 * e).abs() < 1e-14);
            assert!((discriminant(&two, e) - (e * e - 3.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn band_structure_of_period_two() {
        let two = period_two();
        let s5 = 5f64.sqrt();
        let bands = two.bands_in(-3.0, 3.0).unwrap();
        assert_eq!(bands.len(), 2);
        let expected = [(-s5, -1.0), (1.0, s5)];
        for (got, want) in bands.iter().zip(expected) {
            assert!((got.0 - want.0).abs() < 1e-9 && (got.1 - want.1).abs() < 1e-9, "{bands:?}");
        }
        assert!(two.bands_in(-1.0, 1.0).unwrap().is_empty());
        let clipped = two.bands_in(0.0, 2.0).unwrap();
        assert_eq!(clipped.len(), 1);
        assert!((clipped[0].0 - 1.0).abs() < 1e-9 && clipped[0].1 == 2.0);
    }

    #[test]
    fn closed_gaps_merge() {
        // The free chain written with period 4 has touching bands.
        let per = periodize(&JacobiModel::free(), 4, 1.0).unwrap();
        let bands = per.bands_in(-3.0, 3.0).unwrap();
        let measure: f64 = bands.iter().map(|(s, t)| t - s).sum();
        assert!((measure - 4.0).abs() < 1e-8, "{bands:?}");
    }

    #[test]
    fn reflection_and_shift() {
        let sample = JacobiModel::explicit(vec![0.5, 2.0], vec![1.0, 2.0, 3.0]).unwrap();
        let per = periodize(&sample, 3, 0.7).unwrap();
        let r = per.reflected();
        assert_eq!(r.b(), &[3.0, 2.0, 1.0]);
        assert_eq!(r.a(), &[2.0, 0.5, 0.7]);
        let s = per.shifted(1);
        assert_eq!(s.b(), &[2.0, 3.0, 1.0]);
        assert_eq!(s.a(), &[2.0, 0.7, 0.5]);
        // the spectrum is a property of the whole-line operator
        for e in [-1.0, 0.5, 2.2, 3.9] {
            assert!((discriminant(&per, e) - discriminant(&r, e)).abs() < 1e-10);
            assert!((discriminant(&per, e) - discriminant(&s, e)).abs() < 1e-10);
        }
    }

    #[test]
    fn serde_round_trip() {
        let per = period_two();
        let json = serde_json::to_string(&per).unwrap();
        assert_eq!(json, r#"{"a":[1.0],"b":[1.0,-1.0],"coupling":1.0}"#);
        let back: PeriodicJacobi = serde_json::from_str(&json).unwrap();
        assert_eq!(back, per);
        assert!(serde_json::from_str::<PeriodicJacobi>(r#"{"a":[1.0],"b":[1.0,-1.0],"coupling":0.0}"#).is_err());
    }
}
