// SPDX-License-Identifier: Apache-2.0

//! Jacobi parameters, transfer matrices, orthogonal polynomials and periodization.

pub mod matrix2;
pub mod measure;
pub mod model;
pub mod periodic;
pub mod transfer;

pub use matrix2::Matrix2;
pub use measure::{measure_to_jacobi, DiscreteMeasure};
pub use model::{Coefficients, JacobiModel, ModelDocument, ModelKind, GOLDEN_MEAN};
pub use periodic::{discriminant, periodize, restrict_repeated, PeriodicJacobi};
pub use transfer::{
    eigenfunction, one_step_matrix, transfer_matrix, transfer_matrix_unscaled, transfer_product,
    transfer_sweep, ScaledMatrix2,
};
