// SPDX-License-Identifier: Apache-2.0

//! Energy grids and quadrature rules.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_NODES: usize = 2000;
pub const DEFAULT_ETA: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    #[default]
    Midpoint,
    GaussLegendre,
}

/// Interval `[lo, hi]`, a node count, a rule, and the offset `eta` for `E + i eta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyGrid {
    pub lo: f64,
    pub hi: f64,
    #[serde(default = "default_nodes")]
    pub nodes: usize,
    #[serde(default)]
    pub rule: Rule,
    #[serde(default = "default_eta")]
    pub eta: f64,
}

fn default_nodes() -> usize {
    DEFAULT_NODES
}

fn default_eta() -> f64 {
    DEFAULT_ETA
}

impl EnergyGrid {
    pub fn new(lo: f64, hi: f64, nodes: usize) -> Result<Self> {
        let g = EnergyGrid {
            lo,
            hi,
            nodes,
            rule: Rule::Midpoint,
            eta: DEFAULT_ETA,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn with_rule(mut self, rule: Rule) -> Self {
        self.rule = rule;
        self
    }

    pub fn with_eta(mut self, eta: f64) -> Result<Self> {
        self.eta = eta;
        self.validate()?;
        Ok(self)
    }

    /// The same rule and node count on another interval.
    pub fn on(&self, lo: f64, hi: f64) -> Result<Self> {
        let g = EnergyGrid { lo, hi, ..self.clone() };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo < self.hi) || !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(Error::domain(format!("grid interval [{}, {}] is empty", self.lo, self.hi)));
        }
        if self.nodes < 2 {
            return Err(Error::domain("grid needs at least two nodes"));
        }
        if !(self.eta >= 0.0) || !self.eta.is_finite() {
            return Err(Error::domain(format!("eta must be non-negative, got {}", self.eta)));
        }
        Ok(())
    }

    /// Half the nodes, used as the coarse level of a refinement check.
    pub fn coarsened(&self) -> Self {
        EnergyGrid {
            nodes: (self.nodes / 2).max(2),
            ..self.clone()
        }
    }

    pub fn points_and_weights(&self) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (self.hi - self.lo);
        let mid = 0.5 * (self.hi + self.lo);
        match self.rule {
            Rule::Midpoint => {
                let h = (self.hi - self.lo) / self.nodes as f64;
                let x = (0..self.nodes)
                    .map(|i| self.lo + h * (i as f64 + 0.5))
                    .collect();
                (x, vec![h; self.nodes])
            }
            Rule::GaussLegendre => {
                let (x, w) = gauss_legendre(self.nodes);
                (
                    x.iter().map(|t| mid + half * t).collect(),
                    w.iter().map(|w| half * w).collect(),
                )
            }
        }
    }

    pub fn points(&self) -> Vec<f64> {
        self.points_and_weights().0
    }
}

/// `sum(w_i f_i)` with pairwise summation.
pub fn weighted_sum(weights: &[f64], values: &[f64]) -> f64 {
    let terms: Vec<f64> = weights.iter().zip(values).map(|(w, f)| w * f).collect();
    pairwise_sum(&terms)
}

/// Pairwise summation; the result depends only on the order of `xs`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().fold(0.0, |acc, x| acc + x);
    }
    let (l, r) = xs.split_at(xs.len() / 2);
    pairwise_sum(l) + pairwise_sum(r)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre(n, t);
            let step = p / d;
            t -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let dp = legendre(n, t).1;
        let weight = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    (x, w)
}

/// `(P_n(t), P_n'(t))`.
fn legendre(n: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (t * p1 - p0) / (t * t - 1.0))
}

/// Fejér's first rule on `[-1, 1]`: Chebyshev nodes, weights summing to 2, ascending.
pub fn fejer(n: usize) -> (Vec<f64>, Vec<f64>) {
    let n = n.max(1);
    let mut x = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for k in (0..n).rev() {
        let theta = std::f64::consts::PI * (2 * k + 1) as f64 / (2 * n) as f64;
        let series: f64 = (1..=n / 2)
            .map(|j| (2.0 * j as f64 * theta).cos() / (4.0 * (j * j) as f64 - 1.0))
            .sum();
        x.push(theta.cos());
        w.push(2.0 / n as f64 * (1.0 - 2.0 * series));
    }
    (x, w)
}

/// Fejér nodes and weights on a band `[s, t]`. The nodes avoid the edges, where
/// band integrands have square-root behaviour, and the weights sum to `t - s`.
pub fn band_rule(s: f64, t: f64, nodes: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = fejer(nodes);
    let half = 0.5 * (t - s);
    (
        x.iter().map(|u| s + half * (1.0 + u)).collect(),
        w.iter().map(|w| half * w).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in [2, 5, 10, 40] {
            let (x, w) = gauss_legendre(n);
            assert!((pairwise_sum(&w) - 2.0).abs() < 1e-13);
            for deg in 0..(2 * n) {
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                assert!((got - exact).abs() < 1e-12, "n={n} deg={deg}");
            }
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn midpoint_grid() {
        let g = EnergyGrid::new(-1.0, 1.0, 4).unwrap();
        let (x, w) = g.points_and_weights();
        assert_eq!(x, vec![-0.75, -0.25, 0.25, 0.75]);
        assert_eq!(w, vec![0.5; 4]);
        assert!(EnergyGrid::new(1.0, 1.0, 4).is_err());
        assert!(EnergyGrid::new(0.0, 1.0, 1).is_err());
        assert!(EnergyGrid::new(0.0, 1.0, 4).unwrap().with_eta(-1.0).is_err());
    }

    #[test]
    fn band_rule_handles_edge_singularity() {
        // integral of sqrt((E - s)(t - E)) over [s, t] is pi (t - s)^2 / 8
        let (s, t) = (1.0, 5f64.sqrt());
        let (x, w) = band_rule(s, t, 400);
        assert!((pairwise_sum(&w) - (t - s)).abs() < 1e-14);
        assert!(x.iter().all(|&e| e > s && e < t));
        let got = weighted_sum(&w, &x.iter().map(|e| ((e - s) * (t - e)).sqrt()).collect::<Vec<_>>());
        let exact = std::f64::consts::PI * (t - s) * (t - s) / 8.0;
        assert!((got - exact).abs() < 1e-6);
    }

    #[test]
    fn pairwise_matches_naive_for_small_input() {
        let xs: Vec<f64> = (0..1000).map(|k| 1.0 / (k as f64 + 1.0)).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-12);
    }

    #[test]
    fn grid_json_defaults() {
        let g: EnergyGrid = serde_json::from_str(r#"{"lo": -1, "hi": 1}"#).unwrap();
        assert_eq!(g.nodes, DEFAULT_NODES);
        assert_eq!(g.rule, Rule::Midpoint);
        assert_eq!(g.eta, DEFAULT_ETA);
    }
}
