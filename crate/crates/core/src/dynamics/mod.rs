// SPDX-License-Identifier: Apache-2.0

//! Time-domain check of the steady current: quasi-free dynamics on truncated reservoirs.
//!
//! The whole system is one chain: the left lead read inward, the sample, the right
//! lead read outward. The one-particle density is `T_l ⊕ T_L ⊕ T_r` and the current
//! out of the right lead is `tr(T_t j)` with `j = -i lambda [V, 1_r]`.

use std::f64::consts::PI;

use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transport::{steady_current, EbbSpec};

pub const DEFAULT_TRUNCATION: usize = 1500;
pub const DEFAULT_SAMPLES: usize = 2000;
/// Number of time nodes per batched matrix product.
const TIME_CHUNK: usize = 256;

/// Initial one-particle density on the sample.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleState {
    /// `1_L / L`.
    #[default]
    Uniform,
    Empty,
}

#[derive(Clone, Debug)]
pub struct TruncatedEbb {
    /// Diagonal of the chain Hamiltonian.
    pub diag: Vec<f64>,
    /// Off-diagonal; entry `i` couples sites `i` and `i + 1`.
    pub off: Vec<f64>,
    /// Dense initial density `T`.
    pub density: Mat<f64>,
    pub lead_sites: usize,
    pub sample_sites: usize,
    pub coupling: f64,
    pub window: (f64, f64),
}

fn tridiagonal(diag: &[f64], off: &[f64]) -> Mat<f64> {
    let n = diag.len();
    Mat::from_fn(n, n, |i, j| {
        if i == j {
            diag[i]
        } else if i + 1 == j {
            off[i]
        } else if j + 1 == i {
            off[j]
        } else {
            0.0
        }
    })
}

fn eigen(m: &Mat<f64>) -> Result<(Vec<f64>, Mat<f64>)> {
    let evd = m
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let values = (0..m.nrows()).map(|i| s[i]).collect();
    Ok((values, evd.U().to_owned()))
}

/// Spectral projection of a tridiagonal block onto eigenvalues below `mu`.
fn fermi_projection(diag: &[f64], off: &[f64], mu: f64) -> Result<Mat<f64>> {
    let (values, u) = eigen(&tridiagonal(diag, off))?;
    let filled = values.iter().filter(|&&v| v < mu).count();
    let v = u.subcols(0, filled);
    Ok(v * v.transpose())
}

/// Assembles the truncated system with `lead_sites` sites per lead, leads filled
/// up to the spec's window.
pub fn build_truncated(spec: &EbbSpec, lead_sites: usize, state: SampleState) -> Result<TruncatedEbb> {
    build_truncated_with(spec, lead_sites, state, spec.window())
}

/// As [`build_truncated`] with explicit chemical potentials, which may coincide or be
/// in either order.
pub fn build_truncated_with(
    spec: &EbbSpec,
    lead_sites: usize,
    state: SampleState,
    potentials: (f64, f64),
) -> Result<TruncatedEbb> {
    spec.validate()?;
    let m = lead_sites;
    let left = spec.left.outward_chain(m)?;
    let right = spec.right.outward_chain(m)?;
    let l = spec.sites();
    let n = 2 * m + l;

    let mut left_diag = left.b.clone();
    left_diag.reverse();
    let mut left_off = left.a.clone();
    left_off.reverse();

    let mut diag = left_diag.clone();
    diag.extend(&spec.sample.b);
    diag.extend(&right.b);
    let mut off = left_off.clone();
    off.push(spec.coupling);
    off.extend(&spec.sample.a);
    off.push(spec.coupling);
    off.extend(&right.a);
    debug_assert_eq!((diag.len(), off.len()), (n, n - 1));

    let (mu_l, mu_r) = potentials;
    let t_l = fermi_projection(&left_diag, &left_off, mu_l)?;
    let t_r = fermi_projection(&right.b, &right.a, mu_r)?;
    let fill = match state {
        SampleState::Uniform => 1.0 / l as f64,
        SampleState::Empty => 0.0,
    };
    let mut density = Mat::<f64>::zeros(n, n);
    density.submatrix_mut(0, 0, m, m).copy_from(&t_l);
    density.submatrix_mut(m + l, m + l, m, m).copy_from(&t_r);
    for i in m..m + l {
        density[(i, i)] = fill;
    }
    Ok(TruncatedEbb {
        diag,
        off,
        density,
        lead_sites: m,
        sample_sites: l,
        coupling: spec.coupling,
        window: (mu_l, mu_r),
    })
}

impl TruncatedEbb {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn hamiltonian(&self) -> Mat<f64> {
        tridiagonal(&self.diag, &self.off)
    }

    /// Index of the last sample site `delta_L`.
    pub fn sample_end(&self) -> usize {
        self.lead_sites + self.sample_sites - 1
    }

    /// Index of the right contact site `psi_r`.
    pub fn right_contact(&self) -> usize {
        self.lead_sites + self.sample_sites
    }

    /// Dense current operator `j = -i lambda (|delta_L><psi_r| - |psi_r><delta_L|)`, as its
    /// imaginary part (the real part vanishes).
    pub fn current_operator_imag(&self) -> Mat<f64> {
        let n = self.dim();
        let (d, r) = (self.sample_end(), self.right_contact());
        Mat::from_fn(n, n, |i, j| {
            if i == d && j == r {
                -self.coupling
            } else if i == r && j == d {
                self.coupling
            } else {
                0.0
            }
        })
    }

    /// Time at which a front leaving the sample returns from the Dirichlet cut.
    pub fn recurrence_time(&self) -> f64 {
        self.lead_sites as f64 / 2.0
    }
}

/// Eigendecomposition of the truncated Hamiltonian and the density in its eigenbasis.
pub struct Evolution {
    energies: Vec<f64>,
    u: Mat<f64>,
    /// `U^T T U`.
    c: Mat<f64>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    coupling: f64,
    recurrence_time: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CesaroResult {
    /// Trapezoid average over the sampled times.
    pub value: f64,
    /// Average computed in closed form from the spectral decomposition.
    pub exact: f64,
    pub t_max: f64,
    pub samples: usize,
    /// `t_max` reached the reservoir recurrence time.
    pub recurrence_warning: bool,
    pub times: Vec<f64>,
    pub currents: Vec<f64>,
}

/// `(e^{ix} - 1) / (ix)`.
fn cesaro_kernel(x: f64) -> Complex64 {
    if x.abs() < 1e-8 {
        Complex64::new(1.0 - x * x / 6.0, x / 2.0)
    } else {
        Complex64::new(x.sin() / x, (1.0 - x.cos()) / x)
    }
}

impl Evolution {
    pub fn new(sys: &TruncatedEbb) -> Result<Self> {
        let (energies, u) = eigen(&sys.hamiltonian())?;
        let tu = &sys.density * &u;
        let c = u.transpose() * &tu;
        let n = sys.dim();
        let alpha = (0..n).map(|k| u[(sys.right_contact(), k)]).collect();
        let beta = (0..n).map(|k| u[(sys.sample_end(), k)]).collect();
        Ok(Evolution {
            energies,
            u,
            c,
            alpha,
            beta,
            coupling: sys.coupling,
            recurrence_time: sys.recurrence_time(),
        })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// `<J_L>_t = 2 lambda Im <psi_r| e^{-itH} T e^{itH} |delta_L>`.
    pub fn current_at_time(&self, t: f64) -> f64 {
        self.currents(&[t])[0]
    }

    /// Currents at many times, batched as matrix products.
    pub fn currents(&self, times: &[f64]) -> Vec<f64> {
        let n = self.energies.len();
        let mut out = Vec::with_capacity(times.len());
        for chunk in times.chunks(TIME_CHUNK) {
            let m = chunk.len();
            let y_re = Mat::from_fn(n, m, |l, j| self.beta[l] * (chunk[j] * self.energies[l]).cos());
            let y_im = Mat::from_fn(n, m, |l, j| self.beta[l] * (chunk[j] * self.energies[l]).sin());
            let z_re = &self.c * &y_re;
            let z_im = &self.c * &y_im;
            for (j, &t) in chunk.iter().enumerate() {
                let mut im = 0.0;
                for k in 0..n {
                    let (s, co) = (t * self.energies[k]).sin_cos();
                    im += self.alpha[k] * (co * z_im[(k, j)] - s * z_re[(k, j)]);
                }
                out.push(2.0 * self.coupling * im);
            }
        }
        out
    }

    /// Closed-form `(1/T) int_0^T <J_L>_s ds`.
    pub fn cesaro_exact(&self, t_max: f64) -> f64 {
        let n = self.energies.len();
        let mut im = 0.0;
        for k in 0..n {
            let mut row = Complex64::new(0.0, 0.0);
            for l in 0..n {
                let w = self.c[(k, l)] * self.beta[l];
                if w != 0.0 {
                    row += w * cesaro_kernel(t_max * (self.energies[l] - self.energies[k]));
                }
            }
            im += self.alpha[k] * row.im;
        }
        2.0 * self.coupling * im
    }

    /// Trapezoid average over `samples` uniform nodes on `[0, t_max]`.
    pub fn cesaro_current(&self, t_max: f64, samples: usize) -> Result<CesaroResult> {
        if !(t_max > 0.0) || samples < 2 {
            return Err(Error::domain("need t_max > 0 and at least two samples"));
        }
        let h = t_max / (samples - 1) as f64;
        let times: Vec<f64> = (0..samples).map(|j| h * j as f64).collect();
        let currents = self.currents(&times);
        let mut weights = vec![h; samples];
        weights[0] = 0.5 * h;
        weights[samples - 1] = 0.5 * h;
        let value = crate::spectral::quadrature::weighted_sum(&weights, &currents) / t_max;
        Ok(CesaroResult {
            value,
            exact: self.cesaro_exact(t_max),
            t_max,
            samples,
            recurrence_warning: t_max >= self.recurrence_time,
            times,
            currents,
        })
    }

    /// `T(t) = e^{-itH} T e^{itH}` as real and imaginary parts.
    pub fn density_at_time(&self, t: f64) -> (Mat<f64>, Mat<f64>) {
        let n = self.energies.len();
        let phase = |k: usize, l: usize| t * (self.energies[l] - self.energies[k]);
        let x = Mat::from_fn(n, n, |k, l| self.c[(k, l)] * phase(k, l).cos());
        let y = Mat::from_fn(n, n, |k, l| self.c[(k, l)] * phase(k, l).sin());
        let re = &self.u * (&x * self.u.transpose());
        let im = &self.u * (&y * self.u.transpose());
        (re, im)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DynamicsSummary {
    pub cesaro: f64,
    pub cesaro_exact: f64,
    pub steady_reference: f64,
    pub relative_gap: f64,
    pub lead_sites: usize,
    pub t_max: f64,
    pub samples: usize,
    pub recurrence_warning: bool,
}

/// Runs the oracle and compares with the Landauer-Büttiker current of the same spec.
pub fn oracle_run(
    spec: &EbbSpec,
    lead_sites: usize,
    state: SampleState,
    t_max: f64,
    samples: usize,
) -> Result<(DynamicsSummary, CesaroResult)> {
    let sys = build_truncated(spec, lead_sites, state)?;
    let evo = Evolution::new(&sys)?;
    let ces = evo.cesaro_current(t_max, samples)?;
    let steady = steady_current(spec)?.current;
    let relative_gap = if steady != 0.0 {
        (ces.value - steady).abs() / steady.abs()
    } else {
        ces.value.abs()
    };
    Ok((
        DynamicsSummary {
            cesaro: ces.value,
            cesaro_exact: ces.exact,
            steady_reference: steady,
            relative_gap,
            lead_sites,
            t_max,
            samples,
            recurrence_warning: ces.recurrence_warning,
        },
        ces,
    ))
}

/// Columns `t,current`.
pub fn time_series_csv(result: &CesaroResult) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "current"])?;
    for (t, j) in result.times.iter().zip(&result.currents) {
        w.write_record([format!("{t:.17e}"), format!("{j:.17e}")])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

/// Thouless-style reference for a transparent window: `(mu_r - mu_l) / 2 pi`.
pub fn transparent_reference(window: (f64, f64)) -> f64 {
    (window.1 - window.0) / (2.0 * PI)
}
