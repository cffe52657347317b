// SPDX-License-Identifier: Apache-2.0

//! Experiment configuration: parsing, semantic checks, and default materialization.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::classify::Thresholds;
use crate::error::{Error, Result};
use crate::jacobi::{JacobiModel, ModelDocument};
use crate::reservoir::Lead;
use crate::spectral::{EnergyGrid, Rule};

/// Published JSON Schema for experiment configs.
pub const EXPERIMENT_SCHEMA: &str = include_str!("../../schema/experiment.schema.json");

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    #[default]
    SteadyCurrent,
    ThoulessCurrent,
    CrystallineCurrent,
    TmInverseSquareIntegral,
    /// Landauer-Büttiker current of `N` copies of the first `l_list[0]` sites, indexed by `n_list`.
    RepeatedCurrent,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::SteadyCurrent => "steady-current",
            Quantity::ThoulessCurrent => "thouless-current",
            Quantity::CrystallineCurrent => "crystalline-current",
            Quantity::TmInverseSquareIntegral => "tm-inverse-square-integral",
            Quantity::RepeatedCurrent => "repeated-current",
        }
    }

    /// Whether the sweep runs over `N` rather than `L`.
    pub fn uses_copies(self) -> bool {
        self == Quantity::RepeatedCurrent
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_nodes")]
    pub nodes: usize,
    #[serde(default)]
    pub rule: Rule,
    #[serde(default = "default_eta")]
    pub eta: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            nodes: default_nodes(),
            rule: Rule::default(),
            eta: default_eta(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Allowed change of a current between the grid and its half-node version.
    #[serde(default = "default_refinement")]
    pub refinement: f64,
    /// Same, per unit energy, for the transfer-matrix integral.
    #[serde(default = "default_tm_refinement")]
    pub tm_refinement: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            refinement: default_refinement(),
            tm_refinement: default_tm_refinement(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_stem")]
    pub stem: String,
}

impl Default for OutputPaths {
    fn default() -> Self {
        OutputPaths {
            dir: default_dir(),
            stem: default_stem(),
        }
    }
}

impl OutputPaths {
    pub fn csv(&self) -> PathBuf {
        self.dir.join(format!("{}.csv", self.stem))
    }

    pub fn json(&self) -> PathBuf {
        self.dir.join(format!("{}.json", self.stem))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelDocument,
    #[serde(default)]
    pub quantity: Quantity,
    #[serde(default = "free_lead")]
    pub left: Lead,
    #[serde(default = "free_lead")]
    pub right: Lead,
    /// Lead-sample coupling `lambda`.
    #[serde(default = "one")]
    pub coupling: f64,
    /// Coupling `lambda_S` between consecutive copies in the periodized sample.
    #[serde(default = "one")]
    pub internal_coupling: f64,
    #[serde(default = "default_window")]
    pub window: [f64; 2],
    #[serde(default = "default_lengths")]
    pub l_list: Vec<usize>,
    #[serde(default = "default_copies")]
    pub n_list: Vec<usize>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default = "default_band_nodes")]
    pub band_nodes: usize,
    /// Overrides the model's own seed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub classifier: Thresholds,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputPaths,
}

fn default_nodes() -> usize {
    crate::spectral::quadrature::DEFAULT_NODES
}
fn default_eta() -> f64 {
    crate::spectral::quadrature::DEFAULT_ETA
}
fn default_refinement() -> f64 {
    crate::transport::landauer::DEFAULT_REFINEMENT_TOLERANCE
}
fn default_tm_refinement() -> f64 {
    crate::spectral::density::DEFAULT_REFINEMENT_TOLERANCE
}
fn default_dir() -> PathBuf {
    PathBuf::from("results")
}
fn default_stem() -> String {
    "experiment".to_string()
}
fn free_lead() -> Lead {
    Lead::FreeHalfLine
}
fn one() -> f64 {
    1.0
}
fn default_window() -> [f64; 2] {
    [-1.0, 1.0]
}
fn default_band_nodes() -> usize {
    crate::transport::crystal::DEFAULT_BAND_NODES
}

/// `{10 * 2^n : n = 0..5}`.
pub fn default_lengths() -> Vec<usize> {
    (0..6).map(|n| 10 << n).collect()
}

pub fn default_copies() -> Vec<usize> {
    (0..7).map(|n| 1 << n).collect()
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

fn check_list(list: &[usize], pointer: &str) -> Result<()> {
    if list.is_empty() {
        return Err(Error::config(pointer, "list must not be empty"));
    }
    if let Some(i) = list.iter().position(|&x| x == 0) {
        return Err(Error::config(format!("{pointer}/{i}"), "entries must be positive"));
    }
    if let Some(i) = list.windows(2).position(|w| w[0] >= w[1]) {
        return Err(Error::config(format!("{pointer}/{}", i + 1), "entries must be strictly increasing"));
    }
    Ok(())
}

fn positive(x: f64, pointer: &str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::config(pointer, format!("must be a positive finite number, got {x}")))
    }
}

impl ExperimentConfig {
    pub fn new(model: ModelDocument) -> Self {
        ExperimentConfig {
            model,
            quantity: Quantity::default(),
            left: free_lead(),
            right: free_lead(),
            coupling: 1.0,
            internal_coupling: 1.0,
            window: default_window(),
            l_list: default_lengths(),
            n_list: default_copies(),
            grid: GridConfig::default(),
            band_nodes: default_band_nodes(),
            seed: None,
            classifier: Thresholds::default(),
            tolerances: Tolerances::default(),
            output: OutputPaths::default(),
        }
    }

    /// Parses, checks, and materializes a JSON config.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let pointer = pointer_of(e.path());
            Error::config(pointer, e.into_inner().to_string())
        })?;
        config.materialized()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Semantic checks beyond the shape of the document.
    pub fn validate(&self) -> Result<()> {
        self.build_model()?;
        let [lo, hi] = self.window;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::config("/window", format!("need mu_l < mu_r, got [{lo}, {hi}]")));
        }
        if !self.coupling.is_finite() {
            return Err(Error::config("/coupling", "must be finite"));
        }
        if !self.internal_coupling.is_finite() || self.internal_coupling == 0.0 {
            return Err(Error::config("/internal_coupling", "must be finite and non-zero"));
        }
        check_list(&self.l_list, "/l_list")?;
        check_list(&self.n_list, "/n_list")?;
        if self.grid.nodes < 2 {
            return Err(Error::config("/grid/nodes", "need at least 2 nodes"));
        }
        if !(self.grid.eta >= 0.0 && self.grid.eta.is_finite()) {
            return Err(Error::config("/grid/eta", "must be >= 0"));
        }
        if self.band_nodes == 0 {
            return Err(Error::config("/band_nodes", "must be positive"));
        }
        positive(self.classifier.slope_min, "/classifier/slope_min")?;
        positive(self.classifier.value_max, "/classifier/value_max")?;
        positive(self.classifier.floor, "/classifier/floor")?;
        positive(self.tolerances.refinement, "/tolerances/refinement")?;
        positive(self.tolerances.tm_refinement, "/tolerances/tm_refinement")?;
        if self.output.stem.is_empty() || self.output.stem.contains(['/', '\\']) {
            return Err(Error::config("/output/stem", "must be a plain file name"));
        }
        Ok(())
    }

    /// Validated copy with every default written out, including model parameters.
    pub fn materialized(mut self) -> Result<Self> {
        if let Some(seed) = self.seed {
            self.model.seed = Some(seed);
        }
        let model = self
            .build_model()
            .map_err(|e| match e {
                Error::Config { pointer, message } => Error::config(format!("/model{pointer}"), message),
                other => Error::config("/model", other.to_string()),
            })?;
        let mut doc = model.to_document(self.model.length);
        if doc.seed.is_none() && self.model.kind == crate::jacobi::model::KindTag::Anderson {
            doc.seed = Some(0);
        }
        self.model = doc;
        self.validate()?;
        Ok(self)
    }

    pub fn build_model(&self) -> Result<JacobiModel> {
        let mut doc = self.model.clone();
        if let Some(seed) = self.seed {
            doc.seed = Some(seed);
        }
        JacobiModel::from_document(&doc)
    }

    pub fn window(&self) -> (f64, f64) {
        (self.window[0], self.window[1])
    }

    pub fn energy_grid(&self) -> Result<EnergyGrid> {
        EnergyGrid::new(self.window[0], self.window[1], self.grid.nodes)?
            .with_rule(self.grid.rule)
            .with_eta(self.grid.eta)
    }

    /// The sweep index: `l_list`, or `n_list` for repeated samples.
    pub fn index(&self) -> &[usize] {
        if self.quantity.uses_copies() {
            &self.n_list
        } else {
            &self.l_list
        }
    }
}
