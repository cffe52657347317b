// SPDX-License-Identifier: Apache-2.0

//! Configured sweeps, finite-scale verdicts, and the model zoo.

pub mod acet;
pub mod classify;
pub mod config;
pub mod rates;
pub mod run;
pub mod zoo;

pub use acet::{acet_sets_probe, acet_sets_probe_with, AcetNode, AcetReport};
pub use classify::{classify, log_slope, Classification, Thresholds, Verdict};
pub use config::{ExperimentConfig, GridConfig, OutputPaths, Quantity, Tolerances, EXPERIMENT_SCHEMA};
pub use rates::{rate_report, RateReport, RateRow};
pub use run::{run_experiment, ExperimentReport, SweepPoint};
pub use zoo::zoo;
