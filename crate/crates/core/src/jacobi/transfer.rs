// SPDX-License-Identifier: Apache-2.0

//! Transfer matrices `T_E(n) = A_E(n) ... A_E(1)` and generalized eigenfunctions.

use super::matrix2::Matrix2;
use super::model::JacobiModel;
use crate::error::{Error, Result};

/// Entries above this trigger a rescale of the running product.
pub const RESCALE_THRESHOLD: f64 = 1e150;

/// One-step matrix `A_E(x) = a_x^{-1} [[E - b_x, -1], [a_x^2, 0]]`.
pub fn one_step_matrix(energy: f64, a: f64, b: f64) -> Result<Matrix2> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain(format!("off-diagonal a = {a} must be positive")));
    }
    Ok(step(energy, a, b))
}

#[inline]
fn step(energy: f64, a: f64, b: f64) -> Matrix2 {
    let inv = 1.0 / a;
    Matrix2::new((energy - b) * inv, -inv, a, 0.0)
}

/// A matrix stored as `matrix * exp(log_scale)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledMatrix2 {
    pub matrix: Matrix2,
    pub log_scale: f64,
}

impl ScaledMatrix2 {
    pub fn identity() -> Self {
        ScaledMatrix2 {
            matrix: Matrix2::IDENTITY,
            log_scale: 0.0,
        }
    }

    pub fn log_norm(&self) -> f64 {
        self.matrix.norm().ln() + self.log_scale
    }

    /// May be `inf` when the product left the representable range.
    pub fn norm(&self) -> f64 {
        self.log_norm().exp()
    }

    /// `||T||^{-2}`, which stays representable for any growth.
    pub fn inverse_square_norm(&self) -> f64 {
        (-2.0 * self.log_norm()).exp()
    }

    pub fn det(&self) -> f64 {
        self.matrix.det() * (2.0 * self.log_scale).exp()
    }

    /// Trace, saturating to `+-inf` for huge products.
    pub fn trace(&self) -> f64 {
        let t = self.matrix.trace();
        if self.log_scale == 0.0 {
            t
        } else if self.log_scale > 700.0 {
            if t == 0.0 {
                0.0
            } else {
                t.signum() * f64::INFINITY
            }
        } else {
            t * self.log_scale.exp()
        }
    }

    /// The unscaled matrix; `None` if it does not fit in `f64`.
    pub fn to_matrix(&self) -> Option<Matrix2> {
        let m = self.matrix.scaled(self.log_scale.exp());
        m.is_finite().then_some(m)
    }

    /// Left-multiply by a one-step matrix, rescaling when entries get large.
    #[inline]
    fn push(&mut self, energy: f64, a: f64, b: f64) {
        self.matrix = step(energy, a, b) * self.matrix;
        let big = self.matrix.max_abs();
        if big > RESCALE_THRESHOLD {
            self.matrix = self.matrix.scaled(1.0 / big);
            self.log_scale += big.ln();
        }
    }
}

/// Ordered product over explicit coefficient slices, `a.len() == b.len()`.
pub fn transfer_product(a: &[f64], b: &[f64], energy: f64) -> Result<ScaledMatrix2> {
    if a.len() != b.len() {
        return Err(Error::domain("transfer product needs one a and one b per site"));
    }
    if let Some(x) = a.iter().find(|x| !(**x > 0.0)) {
        return Err(Error::domain(format!("off-diagonal a = {x} must be positive")));
    }
    let mut t = ScaledMatrix2::identity();
    for (&ai, &bi) in a.iter().zip(b) {
        t.push(energy, ai, bi);
    }
    Ok(t)
}

/// `T_E(n)` with automatic log-scaling.
pub fn transfer_matrix(model: &JacobiModel, energy: f64, n: usize) -> Result<ScaledMatrix2> {
    if n == 0 {
        return Err(Error::domain("transfer_matrix needs n >= 1"));
    }
    let c = model.coefficients(n)?;
    transfer_product(&c.a, &c.b, energy)
}

/// `T_E(n)` in plain double precision; overflow is reported with the last finite `n`.
pub fn transfer_matrix_unscaled(model: &JacobiModel, energy: f64, n: usize) -> Result<Matrix2> {
    if n == 0 {
        return Err(Error::domain("transfer_matrix needs n >= 1"));
    }
    let c = model.coefficients(n)?;
    let mut t = Matrix2::IDENTITY;
    for (k, (&a, &b)) in c.a.iter().zip(&c.b).enumerate() {
        let next = one_step_matrix(energy, a, b)? * t;
        if !next.is_finite() {
            return Err(Error::Overflow { last_valid: k });
        }
        t = next;
    }
    Ok(t)
}

/// `T_E(n)` for every `n` in `lengths` (strictly increasing) from a single sweep.
pub fn transfer_sweep(
    model: &JacobiModel,
    energy: f64,
    lengths: &[usize],
) -> Result<Vec<ScaledMatrix2>> {
    if lengths.windows(2).any(|w| w[0] >= w[1]) || lengths.first() == Some(&0) {
        return Err(Error::domain("lengths must be positive and strictly increasing"));
    }
    let Some(&max) = lengths.last() else {
        return Ok(Vec::new());
    };
    let c = model.coefficients(max)?;
    Ok(sweep_coefficients(&c.a, &c.b, energy, lengths))
}

pub(crate) fn sweep_coefficients(
    a: &[f64],
    b: &[f64],
    energy: f64,
    lengths: &[usize],
) -> Vec<ScaledMatrix2> {
    let mut out = Vec::with_capacity(lengths.len());
    let mut t = ScaledMatrix2::identity();
    let mut next = lengths.iter().peekable();
    for (k, (&ai, &bi)) in a.iter().zip(b).enumerate() {
        t.push(energy, ai, bi);
        while next.peek() == Some(&&(k + 1)) {
            out.push(t);
            next.next();
        }
    }
    out
}

/// Solution of `J u = E u` with `u(0) = theta`, `u(1) = 1`.
///
/// Returns `u(0), u(1), ..., u(n_max)`. The convention `a_0 = 1` makes
/// `[u(n+1), a_n u(n)] = T_E(n) [1, theta]`.
pub fn eigenfunction(model: &JacobiModel, energy: f64, n_max: usize, theta: f64) -> Result<Vec<f64>> {
    if n_max == 0 {
        return Err(Error::domain("eigenfunction needs n_max >= 1"));
    }
    let mut u = Vec::with_capacity(n_max + 1);
    u.push(theta);
    u.push(1.0);
    if n_max == 1 {
        return Ok(u);
    }
    let c = model.coefficients(n_max - 1)?;
    let mut a_prev = 1.0;
    for n in 1..n_max {
        let (a, b) = (c.a[n - 1], c.b[n - 1]);
        if !(a > 0.0) {
            return Err(Error::domain(format!("a_{n} = {a} must be positive")));
        }
        let next = ((energy - b) * u[n] - a_prev * u[n - 1]) / a;
        u.push(next);
        a_prev = a;
    }
    Ok(u)
}
