// SPDX-License-Identifier: Apache-2.0

//! Steady currents: Landauer-Büttiker, Thouless and crystalline.

pub mod crystal;
pub mod landauer;
pub mod spec;

pub use crystal::{
    crystalline_current, crystalline_transmittance, repeated_currents, repeated_sample_current,
    thouless_current, DEFAULT_BAND_NODES,
};
pub use landauer::{
    effective_green, lb_transmittance, linear_response, steady_current, steady_current_with,
    Transmittance,
};
pub use spec::{EbbSpec, TransportMetadata, TransportResult};
