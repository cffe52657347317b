// SPDX-License-Identifier: Apache-2.0

//! Fixtures shared by the benchmarks.

use jacobi_transport::jacobi::{periodize, JacobiModel, PeriodicJacobi};
use jacobi_transport::reservoir::Lead;
use jacobi_transport::transport::EbbSpec;

pub fn anderson() -> JacobiModel {
    JacobiModel::anderson(3.0, 7).expect("valid disorder")
}

/// Anderson sample of `sites` sites between free leads on `(-1, 1)`.
pub fn anderson_spec(sites: usize, nodes: usize) -> EbbSpec {
    EbbSpec::from_model(&anderson(), sites, Lead::FreeHalfLine, Lead::FreeHalfLine, 1.0, (-1.0, 1.0))
        .and_then(|s| s.with_nodes(nodes))
        .expect("valid spec")
}

pub fn anderson_periodic(period: usize) -> PeriodicJacobi {
    periodize(&anderson(), period, 1.0).expect("valid period")
}

pub fn free_spec(sites: usize) -> EbbSpec {
    EbbSpec::from_model(&JacobiModel::free(), sites, Lead::FreeHalfLine, Lead::FreeHalfLine, 1.0, (-1.0, 1.0))
        .expect("valid spec")
}
