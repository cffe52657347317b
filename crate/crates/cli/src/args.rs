// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "jacobi-transport", version, about = "Spectral and transport computations for Jacobi operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    #[default]
    Json,
}

/// Flags shared by every computing subcommand.
#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// Experiment config (JSON); supplies model, leads, couplings, window and grid.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Model document (JSON), used when no config is given.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Write the result into this directory instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of grid nodes.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub eta: Option<f64>,
    /// Chemical-potential window `a,b`.
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    pub window: Option<[f64; 2]>,
    /// Comma-separated sample lengths.
    #[arg(long = "L-list", value_delimiter = ',')]
    pub l_list: Option<Vec<usize>>,
    /// Number of sample copies.
    #[arg(long = "N")]
    pub copies: Option<usize>,
    /// Exit with status 2 when any numerical-quality warning is raised.
    #[arg(long)]
    pub strict: bool,
}

fn parse_window(s: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected `a,b`, got `{s}`"));
    }
    let lo = parts[0].trim().parse::<f64>().map_err(|e| e.to_string())?;
    let hi = parts[1].trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok([lo, hi])
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Jacobi parameters from spectral data.
    #[command(subcommand)]
    Jacobi(JacobiCommand),
    /// Transfer-matrix quantities.
    #[command(subcommand)]
    Tm(TmCommand),
    #[command(subcommand)]
    Spectral(SpectralCommand),
    /// Steady currents.
    #[command(subcommand)]
    Transport(TransportCommand),
    /// Time-dependent reference computation.
    #[command(subcommand)]
    Oracle(OracleCommand),
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Subcommand, Debug)]
pub enum JacobiCommand {
    /// Jacobi parameters of a discrete measure `{points, weights}`.
    FromMeasure {
        #[arg(long)]
        measure: PathBuf,
        /// Number of parameters; defaults to the number of atoms.
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
pub enum TmCommand {
    /// `||T_E(L)||` for every `L` in the list.
    Norm {
        #[arg(long = "E", allow_hyphen_values = true)]
        energy: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Integral of `||T_E(L)||^-2` over the window.
    Integral {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
pub enum SpectralCommand {
    /// `Im F(E + i eta) / pi` on the grid.
    Density {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
pub enum TransportCommand {
    /// Landauer-Büttiker transmittance and current of the first `L` sites.
    Lb {
        #[arg(long = "L", default_value_t = 10)]
        sites: usize,
        #[command(flatten)]
        common: Common,
    },
    Thouless {
        #[arg(long = "L", default_value_t = 10)]
        sites: usize,
        #[command(flatten)]
        common: Common,
    },
    Crystalline {
        #[arg(long = "L", default_value_t = 10)]
        sites: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Currents of `1..=N` repeated copies and their running means.
    Repeat {
        #[arg(long = "L", default_value_t = 1)]
        sites: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Cesàro-averaged current of a truncated system, compared with Landauer-Büttiker.
    Dynamics {
        #[arg(long = "L", default_value_t = 5)]
        sites: usize,
        /// Sites kept per lead.
        #[arg(long = "M", default_value_t = 1500)]
        lead_sites: usize,
        #[arg(long, default_value_t = 500.0)]
        t_max: f64,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long)]
        empty_sample: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
pub enum ExperimentCommand {
    /// Run the configured sweep and write `<stem>.csv` and `<stem>.json`.
    Run {
        #[command(flatten)]
        common: Common,
    },
    /// Per-node comparison of persistent conductance and bounded transfer matrices.
    Acet {
        #[arg(long, default_value_t = 1e-3)]
        threshold: f64,
        #[arg(long, default_value_t = 1e2)]
        norm_threshold: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Empirical decay slopes for the model zoo, or for the model given.
    Rates {
        #[command(flatten)]
        common: Common,
    },
    /// Print the JSON Schema for experiment configs.
    Schema,
}
