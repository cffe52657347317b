// SPDX-License-Identifier: Apache-2.0

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod harness;
pub mod jacobi;
pub mod reservoir;
pub mod spectral;
pub mod transport;

pub use error::{Error, Result};
