// SPDX-License-Identifier: Apache-2.0

//! Half-line Jacobi operators given by their parameter sequences.
//!
//! Sites are numbered from 1. `a_n` couples sites `n` and `n + 1`, `b_n` is
//! the diagonal entry at site `n`. Infinite families are generated on demand,
//! so asking for the first `n` coefficients never materializes more than `n`.

use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::periodic::PeriodicJacobi;
use crate::error::{Error, Result};

/// Inverse golden mean, the default frequency of the quasi-periodic families.
pub const GOLDEN_MEAN: f64 = 0.618_033_988_749_894_9;

/// Default bound on `|a_n| + |b_n|`.
pub const DEFAULT_BOUND: f64 = 1e3;

#[derive(Clone, Debug, PartialEq)]
pub enum ModelKind {
    /// Finite list; `a` has either `b.len()` or `b.len() - 1` entries.
    Explicit { a: Vec<f64>, b: Vec<f64> },
    /// `a_n = 1`, `b_n = 0`.
    Free,
    /// `a_n = 1`, `b_n` i.i.d. uniform on `[-W/2, W/2]`.
    Anderson { disorder: f64, seed: u64 },
    /// `a_n = 1`, `b_n = 2 lambda cos(2 pi (alpha n + theta))`.
    AlmostMathieu { coupling: f64, frequency: f64, phase: f64 },
    /// `a_n = 1`, `b_n = lambda * 1[1 - alpha <= {n alpha} < 1]` with alpha the golden mean.
    Fibonacci { coupling: f64 },
}

/// First `n` Jacobi parameters of a model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl Coefficients {
    pub fn sites(&self) -> usize {
        self.b.len()
    }

    /// The same chain read from the last site to the first.
    pub fn reversed(&self) -> Coefficients {
        let mut a: Vec<f64> = self.a[..self.b.len().saturating_sub(1)].to_vec();
        a.reverse();
        let mut b = self.b.clone();
        b.reverse();
        Coefficients { a, b }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JacobiModel {
    kind: ModelKind,
    bound: f64,
}

/// Seedable portable generator behind the Anderson family.
///
/// xoshiro256** seeded through SplitMix64 (`seed_from_u64`); a uniform deviate is
/// `(x >> 11) * 2^-53`. Any language with those two reference algorithms
/// reproduces the same potentials.
pub struct AndersonStream {
    rng: Xoshiro256StarStar,
    disorder: f64,
}

impl AndersonStream {
    pub fn new(disorder: f64, seed: u64) -> Self {
        AndersonStream {
            rng: Xoshiro256StarStar::seed_from_u64(seed),
            disorder,
        }
    }

    pub fn next_uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

impl Iterator for AndersonStream {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        Some(self.disorder * (self.next_uniform() - 0.5))
    }
}

impl JacobiModel {
    pub fn free() -> Self {
        JacobiModel {
            kind: ModelKind::Free,
            bound: DEFAULT_BOUND,
        }
    }

    pub fn anderson(disorder: f64, seed: u64) -> Result<Self> {
        if !disorder.is_finite() || disorder < 0.0 {
            return Err(Error::domain(format!("disorder width must be >= 0, got {disorder}")));
        }
        Self::checked(ModelKind::Anderson { disorder, seed }, DEFAULT_BOUND)
    }

    pub fn almost_mathieu(coupling: f64, frequency: f64, phase: f64) -> Result<Self> {
        Self::checked(
            ModelKind::AlmostMathieu {
                coupling,
                frequency,
                phase,
            },
            DEFAULT_BOUND,
        )
    }

    pub fn fibonacci(coupling: f64) -> Result<Self> {
        Self::checked(ModelKind::Fibonacci { coupling }, DEFAULT_BOUND)
    }

    pub fn explicit(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        Self::checked(ModelKind::Explicit { a, b }, DEFAULT_BOUND)
    }

    pub fn explicit_with_bound(a: Vec<f64>, b: Vec<f64>, bound: f64) -> Result<Self> {
        Self::checked(ModelKind::Explicit { a, b }, bound)
    }

    /// Same model with a different bound on `|a_n| + |b_n|`.
    pub fn with_bound(self, bound: f64) -> Result<Self> {
        Self::checked(self.kind, bound)
    }

    fn checked(kind: ModelKind, bound: f64) -> Result<Self> {
        if !(bound > 0.0) {
            return Err(Error::domain("bound must be positive"));
        }
        let sup = match &kind {
            ModelKind::Explicit { a, b } => {
                if b.is_empty() {
                    return Err(Error::domain("explicit model needs at least one site"));
                }
                if a.len() + 1 != b.len() && a.len() != b.len() {
                    return Err(Error::domain(format!(
                        "explicit model has {} off-diagonal entries for {} sites",
                        a.len(),
                        b.len()
                    )));
                }
                if let Some((i, x)) = a.iter().enumerate().find(|(_, x)| !(**x > 0.0) || !x.is_finite()) {
                    return Err(Error::domain(format!("a_{} = {x} is not a positive real", i + 1)));
                }
                if let Some((i, x)) = b.iter().enumerate().find(|(_, x)| !x.is_finite()) {
                    return Err(Error::domain(format!("b_{} = {x} is not finite", i + 1)));
                }
                (0..b.len())
                    .map(|i| a.get(i).copied().unwrap_or(0.0) + b[i].abs())
                    .fold(0.0, f64::max)
            }
            ModelKind::Free => 1.0,
            ModelKind::Anderson { disorder, .. } => 1.0 + 0.5 * disorder,
            ModelKind::AlmostMathieu {
                coupling,
                frequency,
                phase,
            } => {
                if !coupling.is_finite() || !frequency.is_finite() || !phase.is_finite() {
                    return Err(Error::domain("almost Mathieu parameters must be finite"));
                }
                1.0 + 2.0 * coupling.abs()
            }
            ModelKind::Fibonacci { coupling } => {
                if !coupling.is_finite() {
                    return Err(Error::domain("Fibonacci coupling must be finite"));
                }
                1.0 + coupling.abs()
            }
        };
        if sup > bound {
            return Err(Error::domain(format!(
                "sup |a_n| + |b_n| = {sup} exceeds the configured bound {bound}"
            )));
        }
        Ok(JacobiModel { kind, bound })
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// Number of sites for finite lists, `None` for the infinite families.
    pub fn len(&self) -> Option<usize> {
        match &self.kind {
            ModelKind::Explicit { b, .. } => Some(b.len()),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// The exact periodic structure of the model, when it has one.
    pub fn period(&self) -> Option<PeriodicJacobi> {
        match self.kind {
            ModelKind::Free => Some(PeriodicJacobi::from_parts(vec![1.0], vec![0.0], 1.0)),
            _ => None,
        }
    }

    fn generate(&self, count: usize) -> (Vec<f64>, Vec<f64>) {
        match &self.kind {
            ModelKind::Explicit { a, b } => (a.clone(), b.clone()),
            ModelKind::Free => (vec![1.0; count], vec![0.0; count]),
            ModelKind::Anderson { disorder, seed } => (
                vec![1.0; count],
                AndersonStream::new(*disorder, *seed).take(count).collect(),
            ),
            ModelKind::AlmostMathieu {
                coupling,
                frequency,
                phase,
            } => {
                let b = (1..=count)
                    .map(|n| {
                        let x = (frequency * n as f64 + phase).rem_euclid(1.0);
                        2.0 * coupling * (std::f64::consts::TAU * x).cos()
                    })
                    .collect();
                (vec![1.0; count], b)
            }
            ModelKind::Fibonacci { coupling } => {
                let b = (1..=count)
                    .map(|n| {
                        let x = (GOLDEN_MEAN * n as f64).rem_euclid(1.0);
                        if x >= 1.0 - GOLDEN_MEAN {
                            *coupling
                        } else {
                            0.0
                        }
                    })
                    .collect();
                (vec![1.0; count], b)
            }
        }
    }

    /// `a_1..a_n` and `b_1..b_n`, as needed by transfer matrices.
    pub fn coefficients(&self, n: usize) -> Result<Coefficients> {
        let (mut a, mut b) = self.generate(n);
        if a.len() < n || b.len() < n {
            return Err(Error::OutOfRange {
                requested: n,
                available: a.len().min(b.len()),
            });
        }
        a.truncate(n);
        b.truncate(n);
        Ok(Coefficients { a, b })
    }

    /// The finite sample `J_L`: `b_1..b_L` and the `L - 1` couplings inside it.
    pub fn restrict(&self, sites: usize) -> Result<Coefficients> {
        if sites == 0 {
            return Err(Error::domain("a sample needs at least one site"));
        }
        let (mut a, mut b) = self.generate(sites);
        if b.len() < sites || a.len() < sites - 1 {
            return Err(Error::OutOfRange {
                requested: sites,
                available: b.len(),
            });
        }
        a.truncate(sites - 1);
        b.truncate(sites);
        Ok(Coefficients { a, b })
    }

    /// Coefficients of a finite explicit list, whatever their length.
    pub fn all_coefficients(&self) -> Option<Coefficients> {
        match &self.kind {
            ModelKind::Explicit { a, b } => Some(Coefficients {
                a: a.clone(),
                b: b.clone(),
            }),
            _ => None,
        }
    }

    pub fn from_document(doc: &ModelDocument) -> Result<Self> {
        fn params<T: serde::de::DeserializeOwned>(doc: &ModelDocument) -> Result<T> {
            serde_json::from_value(Value::Object(doc.params.clone()))
                .map_err(|e| Error::config("/params", e.to_string()))
        }
        let model = match doc.kind {
            KindTag::Free => {
                if !doc.params.is_empty() {
                    return Err(Error::config("/params", "free model takes no parameters"));
                }
                JacobiModel::free()
            }
            KindTag::Explicit => {
                let p: ExplicitParams = params(doc)?;
                JacobiModel::explicit(p.a, p.b)?
            }
            KindTag::Anderson => {
                let p: AndersonParams = params(doc)?;
                JacobiModel::anderson(p.w, doc.seed.unwrap_or(0))?
            }
            KindTag::AlmostMathieu => {
                let p: AlmostMathieuParams = params(doc)?;
                JacobiModel::almost_mathieu(p.lambda, p.alpha, p.theta)?
            }
            KindTag::Fibonacci => {
                let p: FibonacciParams = params(doc)?;
                JacobiModel::fibonacci(p.lambda)?
            }
        };
        match doc.bound {
            Some(bound) => model.with_bound(bound),
            None => Ok(model),
        }
    }

    pub fn to_document(&self, length: Option<usize>) -> ModelDocument {
        let (kind, params, seed) = match &self.kind {
            ModelKind::Explicit { a, b } => (
                KindTag::Explicit,
                serde_json::to_value(ExplicitParams {
                    a: a.clone(),
                    b: b.clone(),
                }),
                None,
            ),
            ModelKind::Free => (KindTag::Free, Ok(Value::Object(Map::new())), None),
            ModelKind::Anderson { disorder, seed } => (
                KindTag::Anderson,
                serde_json::to_value(AndersonParams { w: *disorder }),
                Some(*seed),
            ),
            ModelKind::AlmostMathieu {
                coupling,
                frequency,
                phase,
            } => (
                KindTag::AlmostMathieu,
                serde_json::to_value(AlmostMathieuParams {
                    lambda: *coupling,
                    alpha: *frequency,
                    theta: *phase,
                }),
                None,
            ),
            ModelKind::Fibonacci { coupling } => (
                KindTag::Fibonacci,
                serde_json::to_value(FibonacciParams { lambda: *coupling }),
                None,
            ),
        };
        let params = match params {
            Ok(Value::Object(map)) => map,
            _ => Map::new(),
        };
        ModelDocument {
            kind,
            params,
            seed,
            length,
            bound: (self.bound != DEFAULT_BOUND).then_some(self.bound),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindTag {
    Explicit,
    Free,
    Anderson,
    AlmostMathieu,
    Fibonacci,
}

/// JSON form of a model: `{kind, params, seed, length}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub kind: KindTag,
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitParams {
    a: Vec<f64>,
    b: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AndersonParams {
    #[serde(rename = "W")]
    w: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlmostMathieuParams {
    lambda: f64,
    #[serde(default = "golden")]
    alpha: f64,
    #[serde(default = "default_phase")]
    theta: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FibonacciParams {
    lambda: f64,
}

fn golden() -> f64 {
    GOLDEN_MEAN
}

fn default_phase() -> f64 {
    0.37
}
