// SPDX-License-Identifier: Apache-2.0

//! Borel transforms, density estimates and quadrature.

pub mod borel;
pub mod density;
pub mod quadrature;

pub use borel::{borel_transform, BorelSource, BorelTransform, BorelValue, Tail};
pub use density::{
    ac_density, sigma_ac_probe, tm_inverse_square_integral, weak_density_approx, IntegralEstimate,
    ProbeNode,
};
pub use quadrature::{EnergyGrid, Rule};
