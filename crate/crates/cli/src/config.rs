//! Configuration ingestion: JSON model and experiment configs with
//! up-front, field-precise validation.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use gossip_blocks_core::model::{
    solve_interaction_probs_k, BlockGossipModel, CommunityAssignment, ModelError,
};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Invalid(String),
    #[error("model is invalid: {0}")]
    Model(#[from] ModelError),
}

/// One community's regular/stubborn split.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommunityCount {
    pub regular: usize,
    pub stubborn: usize,
}

/// Model config file schema. Exactly one of `ratio`, `w_s`, or the pair
/// (`w_s`, `w_d`) fixes the interaction probabilities; whatever is left out
/// is solved from the pair normalization.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub communities: Vec<CommunityCount>,
    #[serde(default)]
    pub w_s: Option<f64>,
    #[serde(default)]
    pub w_d: Option<f64>,
    #[serde(default)]
    pub ratio: Option<f64>,
    #[serde(default = "default_q")]
    pub q: f64,
    pub stubborn_states: Vec<f64>,
}

fn default_q() -> f64 {
    0.5
}

impl ModelConfig {
    pub fn build(&self) -> Result<BlockGossipModel, ConfigError> {
        if self.communities.len() < 2 {
            return Err(ConfigError::Invalid(format!(
                "\"communities\" needs at least 2 entries, got {}",
                self.communities.len()
            )));
        }
        let counts: Vec<(usize, usize)> = self
            .communities
            .iter()
            .map(|c| (c.regular, c.stubborn))
            .collect();
        let sizes: Vec<usize> = counts.iter().map(|&(r, s)| r + s).collect();
        let (w_s, w_d) = match (self.ratio, self.w_s, self.w_d) {
            (Some(ratio), None, None) => solve_interaction_probs_k(&sizes, ratio)?,
            (None, Some(w_s), Some(w_d)) => (w_s, w_d),
            (None, Some(w_s), None) => {
                let (within, cross) = pair_coefficients(&sizes);
                (w_s, (2.0 - within * w_s) / cross)
            }
            (None, None, Some(w_d)) => {
                let (within, cross) = pair_coefficients(&sizes);
                ((2.0 - cross * w_d) / within, w_d)
            }
            (None, None, None) => {
                return Err(ConfigError::Invalid(
                    "one of \"ratio\", \"w_s\", \"w_d\" must be given".into(),
                ))
            }
            _ => {
                return Err(ConfigError::Invalid(
                    "\"ratio\" cannot be combined with explicit \"w_s\"/\"w_d\"".into(),
                ))
            }
        };
        let n_s: usize = counts.iter().map(|&(_, s)| s).sum();
        if self.stubborn_states.len() != n_s {
            return Err(ConfigError::Invalid(format!(
                "\"stubborn_states\" has {} entries but the communities declare {} stubborn agents",
                self.stubborn_states.len(),
                n_s
            )));
        }
        let assignment = CommunityAssignment::sorted_blocks(&counts)?;
        Ok(BlockGossipModel::new(
            assignment,
            w_s,
            w_d,
            self.q,
            self.stubborn_states.clone(),
        )?)
    }
}

fn pair_coefficients(sizes: &[usize]) -> (f64, f64) {
    let total: usize = sizes.iter().sum();
    let within: f64 = sizes.iter().map(|&nk| (nk * (nk - 1)) as f64).sum();
    let cross: f64 = sizes.iter().map(|&nk| (nk * (total - nk)) as f64).sum();
    (within, cross)
}

/// Initial regular states: a seeded uniform draw or an explicit vector.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum InitialStates {
    Uniform([f64; 2]),
    Explicit(Vec<f64>),
}

impl Default for InitialStates {
    fn default() -> Self {
        InitialStates::Uniform([-1.0, 1.0])
    }
}

/// Snapshot grid: geometric ⌈ratio^k⌉ (deduplicated) or an explicit list.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum SnapshotGrid {
    Geometric(f64),
    Explicit(Vec<u64>),
}

impl Default for SnapshotGrid {
    fn default() -> Self {
        SnapshotGrid::Geometric(1.2)
    }
}

impl SnapshotGrid {
    /// Materializes sorted distinct ticks in [1, steps], always ending at
    /// `steps`.
    pub fn ticks(&self, steps: u64) -> Vec<u64> {
        let mut ticks: Vec<u64> = match self {
            SnapshotGrid::Geometric(ratio) => {
                let mut out = Vec::new();
                let mut x = 1.0f64;
                while (x.ceil() as u64) <= steps {
                    out.push(x.ceil() as u64);
                    x *= ratio.max(1.0 + 1e-9);
                }
                out
            }
            SnapshotGrid::Explicit(list) => list.clone(),
        };
        ticks.retain(|&t| t >= 1 && t <= steps);
        if steps >= 1 {
            ticks.push(steps);
        }
        ticks.sort_unstable();
        ticks.dedup();
        ticks
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Single,
    RecoveryCurve,
    Compare,
    SbmSweep,
    Karate,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::Single => "single",
            ExperimentKind::RecoveryCurve => "recovery-curve",
            ExperimentKind::Compare => "compare",
            ExperimentKind::SbmSweep => "sbm-sweep",
            ExperimentKind::Karate => "karate",
        }
    }
}

/// SBM sweep grid parameters.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SbmSweepConfig {
    #[serde(default = "default_sweep_sizes")]
    pub sizes: Vec<usize>,
    #[serde(default = "default_sweep_graphs")]
    pub graphs: usize,
    #[serde(default = "default_sweep_runs")]
    pub runs_per_graph: usize,
    /// Fraction of regular agents per community (the rest are stubborn).
    #[serde(default = "default_regular_fraction")]
    pub regular_fraction: f64,
}

fn default_sweep_sizes() -> Vec<usize> {
    vec![100, 300, 900]
}
fn default_sweep_graphs() -> usize {
    20
}
fn default_sweep_runs() -> usize {
    20
}
fn default_regular_fraction() -> f64 {
    0.45
}

impl Default for SbmSweepConfig {
    fn default() -> Self {
        Self {
            sizes: default_sweep_sizes(),
            graphs: default_sweep_graphs(),
            runs_per_graph: default_sweep_runs(),
            regular_fraction: default_regular_fraction(),
        }
    }
}

/// Karate-club experiment parameters (1-based agent ids, as in the data's
/// own convention).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KarateConfig {
    #[serde(default = "default_karate_stubborn")]
    pub stubborn_agents: [usize; 2],
    #[serde(default = "default_karate_states")]
    pub stubborn_states: [f64; 2],
    #[serde(default = "default_karate_witnesses")]
    pub witnesses: [usize; 2],
}

fn default_karate_stubborn() -> [usize; 2] {
    [1, 34]
}
fn default_karate_states() -> [f64; 2] {
    [1.0, -1.0]
}
fn default_karate_witnesses() -> [usize; 2] {
    [2, 33]
}

impl Default for KarateConfig {
    fn default() -> Self {
        Self {
            stubborn_agents: default_karate_stubborn(),
            stubborn_states: default_karate_states(),
            witnesses: default_karate_witnesses(),
        }
    }
}

/// Experiment config file schema. Kind-specific sections are validated
/// against the invoked subcommand.
#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub kind: Option<String>,
    #[serde(default)]
    pub model: Option<ModelConfig>,
    #[serde(default)]
    pub model_path: Option<PathBuf>,
    #[serde(default)]
    pub steps: Option<u64>,
    #[serde(default)]
    pub replications: Option<u64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub snapshot_grid: Option<SnapshotGrid>,
    #[serde(default)]
    pub initial_states: Option<InitialStates>,
    #[serde(default)]
    pub step_a: Option<f64>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub methods: Option<Vec<String>>,
    #[serde(default)]
    pub sbm: Option<SbmSweepConfig>,
    #[serde(default)]
    pub karate: Option<KarateConfig>,
    #[serde(default)]
    pub trajectory_decimation: Option<u64>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let config: ExperimentConfig =
            serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
                path: path.to_path_buf(),
                source,
            })?;
        Ok(config)
    }

    /// Checks the declared kind (when present) and kind-specific fields.
    pub fn validate_for(&self, kind: ExperimentKind) -> Result<(), ConfigError> {
        if let Some(declared) = &self.kind {
            if declared != kind.as_str() {
                return Err(ConfigError::Invalid(format!(
                    "config declares kind {declared:?} but the {} experiment was invoked",
                    kind.as_str()
                )));
            }
        }
        if let Some(reps) = self.replications {
            if reps == 0 {
                return Err(ConfigError::Invalid(
                    "\"replications\" must be at least 1".into(),
                ));
            }
        }
        if self.model.is_some() && self.model_path.is_some() {
            return Err(ConfigError::Invalid(
                "give either inline \"model\" or \"model_path\", not both".into(),
            ));
        }
        if matches!(kind, ExperimentKind::SbmSweep) {
            if let Some(sbm) = &self.sbm {
                if sbm.sizes.is_empty() {
                    return Err(ConfigError::Invalid("\"sbm.sizes\" is empty".into()));
                }
                if !(sbm.regular_fraction > 0.0 && sbm.regular_fraction < 0.5) {
                    return Err(ConfigError::Invalid(
                        "\"sbm.regular_fraction\" must lie in (0, 0.5)".into(),
                    ));
                }
                if sbm.graphs == 0 || sbm.runs_per_graph == 0 {
                    return Err(ConfigError::Invalid(
                        "\"sbm.graphs\" and \"sbm.runs_per_graph\" must be at least 1".into(),
                    ));
                }
            }
        }
        if matches!(kind, ExperimentKind::Karate) {
            if let Some(karate) = &self.karate {
                for agent in karate.stubborn_agents.iter().chain(&karate.witnesses) {
                    if !(1..=34).contains(agent) {
                        return Err(ConfigError::Invalid(format!(
                            "karate agent ids are 1..=34, got {agent}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Loads the inline or referenced model, if any.
    pub fn model(&self, base: Option<&Path>) -> Result<Option<BlockGossipModel>, ConfigError> {
        if let Some(inline) = &self.model {
            return Ok(Some(inline.build()?));
        }
        if let Some(path) = &self.model_path {
            let resolved = match base {
                Some(dir) if path.is_relative() => dir.join(path),
                _ => path.clone(),
            };
            let text = std::fs::read_to_string(&resolved).map_err(|source| ConfigError::Io {
                path: resolved.clone(),
                source,
            })?;
            let config: ModelConfig =
                serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
                    path: resolved,
                    source,
                })?;
            return Ok(Some(config.build()?));
        }
        Ok(None)
    }
}
