// SPDX-License-Identifier: Apache-2.0

//! The shipped model zoo.

use crate::error::Result;
use crate::jacobi::{JacobiModel, GOLDEN_MEAN};

pub const ZOO_SEED: u64 = 7;
pub const ZOO_DISORDER: f64 = 3.0;
pub const ZOO_PHASE: f64 = 0.37;

/// `(label, model)` pairs: free, Anderson `W = 3`, almost Mathieu at `lambda = 0.5` and `2.0`.
pub fn zoo() -> Result<Vec<(&'static str, JacobiModel)>> {
    Ok(vec![
        ("free", JacobiModel::free()),
        ("anderson-w3", JacobiModel::anderson(ZOO_DISORDER, ZOO_SEED)?),
        ("almost-mathieu-0.5", JacobiModel::almost_mathieu(0.5, GOLDEN_MEAN, ZOO_PHASE)?),
        ("almost-mathieu-2.0", JacobiModel::almost_mathieu(2.0, GOLDEN_MEAN, ZOO_PHASE)?),
    ])
}
