// SPDX-License-Identifier: Apache-2.0

//! Reservoir models: free, wide-band, periodic and tabulated leads.

pub mod lead;
pub mod mfunction;
pub mod table;

pub use lead::{free_half_line_borel, Lead, SUPPORT_TOLERANCE};
pub use mfunction::{m_function, m_residual, MValue, Side};
pub use table::TableLead;
