//! Experiment harness: learning curves, robustness evaluation and plots.

mod curve;
mod plot;
mod robust;

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::factext::{extract, ExtractConfig, FactextError};
use crate::logic::{Atom, Clause, Program, Term, DEFAULT_DEPTH_BOUND};
use crate::lptext::LpError;
use crate::scene::{generate_dataset, read_manifest, DatasetConfig, DatasetItem, PpmError, Raster, SceneError, Variant};

pub use curve::{learn, learning_curve, predict, split, write_curve_csv, write_predictions_csv, CurveReport, LearnOutput, Prediction, RunResult};
pub use plot::{plot_svg, plot_svg_from_csv};
pub use robust::{robustness_eval, write_robust_csv, RobustRow, OCCLUSION_LIMIT};

pub const TARGET: &str = "traffic_sign";
pub const STOP_CLASS: &str = "stop_sign";
pub const BUNDLED_MODES: &str = include_str!("../../data/sign.modes");
pub const BUNDLED_METARULES: &str = include_str!("../../data/sign.mrules");

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("insufficient data: need more than {needed} examples per class, have {positives} positive and {negatives} negative")]
    InsufficientData { needed: usize, positives: usize, negatives: usize },
    #[error("malformed CSV: {0}")]
    MalformedCsv(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Image { path: String, source: PpmError },
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Factext(#[from] FactextError),
    #[error(transparent)]
    Parse(#[from] LpError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Mil,
    Mdie,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Mil => "mil",
            Engine::Mdie => "mdie",
        }
    }
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mil" => Ok(Engine::Mil),
            "mdie" => Ok(Engine::Mdie),
            _ => Err(format!("unknown engine '{s}' (expected mil or mdie)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MilSettings {
    pub max_clauses: usize,
    pub enable_invention: bool,
}

impl Default for MilSettings {
    fn default() -> Self {
        MilSettings { max_clauses: 3, enable_invention: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MdieSettings {
    pub max_body_literals: usize,
    pub noise: usize,
    pub max_nodes: usize,
    pub variable_depth: usize,
}

impl Default for MdieSettings {
    fn default() -> Self {
        MdieSettings { max_body_literals: 4, noise: 0, max_nodes: 5000, variable_depth: 2 }
    }
}

/// Where the labelled signs come from: an extracted directory, or a
/// generated dataset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DataSettings {
    pub dir: Option<PathBuf>,
    pub pos: usize,
    pub neg: usize,
    pub seed: u64,
    pub variant: Variant,
}

impl Default for DataSettings {
    fn default() -> Self {
        DataSettings { dir: None, pos: 20, neg: 20, seed: 0, variant: Variant::Base }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub engine: Option<Engine>,
    #[serde(default)]
    pub engines: Vec<Engine>,
    pub train_sizes: Vec<usize>,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_depth")]
    pub depth_bound: usize,
    #[serde(default)]
    pub mil: MilSettings,
    #[serde(default)]
    pub mdie: MdieSettings,
    #[serde(default)]
    pub data: DataSettings,
    #[serde(default)]
    pub modes: Option<PathBuf>,
    #[serde(default)]
    pub metarules: Option<PathBuf>,
    #[serde(default = "default_timeout")]
    pub timeout_ms: u64,
    /// Worker threads for repeats; rayon's default when absent.
    #[serde(default)]
    pub workers: Option<usize>,
    /// Write measured learn times; when false the time column is 0 so the
    /// CSV is byte-reproducible.
    #[serde(default = "default_true")]
    pub record_time: bool,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub predictions: Option<PathBuf>,
    #[serde(default)]
    pub plot: Option<PathBuf>,
}

fn default_repeats() -> usize {
    100
}

fn default_depth() -> usize {
    DEFAULT_DEPTH_BOUND
}

fn default_timeout() -> u64 {
    10_000
}

fn default_true() -> bool {
    true
}

impl ExperimentConfig {
    pub fn new(engines: &[Engine], train_sizes: &[usize], repeats: usize, seed: u64) -> Self {
        ExperimentConfig {
            engine: None,
            engines: engines.to_vec(),
            train_sizes: train_sizes.to_vec(),
            repeats,
            seed,
            depth_bound: DEFAULT_DEPTH_BOUND,
            mil: MilSettings::default(),
            mdie: MdieSettings::default(),
            data: DataSettings::default(),
            modes: None,
            metarules: None,
            timeout_ms: default_timeout(),
            workers: None,
            record_time: true,
            out: None,
            predictions: None,
            plot: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let c: ExperimentConfig = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    /// `engine` and `engines` combined, deduplicated, in order.
    pub fn engine_list(&self) -> Vec<Engine> {
        let mut out: Vec<Engine> = self.engine.into_iter().collect();
        for e in &self.engines {
            if !out.contains(e) {
                out.push(*e);
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.engine_list().is_empty() {
            return Err(HarnessError::Config("no engine given".into()));
        }
        if self.repeats == 0 {
            return Err(HarnessError::Config("repeats must be at least 1".into()));
        }
        if self.train_sizes.is_empty() || self.train_sizes.contains(&0) {
            return Err(HarnessError::Config("train sizes must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusItem {
    pub sign_id: String,
    pub positive: bool,
    pub occlusion: f64,
}

/// Extracted background knowledge for a set of labelled signs.
#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub bk: Program,
    pub items: Vec<CorpusItem>,
}

impl Corpus {
    pub fn positives(&self) -> Vec<&CorpusItem> {
        self.items.iter().filter(|i| i.positive).collect()
    }

    pub fn negatives(&self) -> Vec<&CorpusItem> {
        self.items.iter().filter(|i| !i.positive).collect()
    }

    pub fn from_dataset(items: &[DatasetItem], config: &ExtractConfig) -> Corpus {
        let facts: Vec<_> = items.par_iter().map(|it| extract(&it.raster, &it.spec.sign_id, config)).collect();
        let mut bk = Program::new();
        for f in &facts {
            bk.extend(f.facts.iter().cloned().map(Clause::fact));
        }
        let items = items
            .iter()
            .map(|it| CorpusItem { sign_id: it.spec.sign_id.clone(), positive: it.positive, occlusion: it.occlusion })
            .collect();
        Corpus { bk, items }
    }

    pub fn generate(config: &DatasetConfig, extract: &ExtractConfig) -> Result<Corpus, HarnessError> {
        Ok(Corpus::from_dataset(&generate_dataset(config)?, extract))
    }

    /// Reads `manifest.json` and the images it lists from `dir`.
    pub fn from_dir(dir: &Path, config: &ExtractConfig) -> Result<Corpus, HarnessError> {
        let entries = read_manifest(&dir.join("manifest.json"))?;
        let facts = entries
            .par_iter()
            .map(|e| {
                let path = dir.join(&e.file);
                let raster = Raster::from_ppm(&fs::read(&path)?)
                    .map_err(|source| HarnessError::Image { path: path.display().to_string(), source })?;
                Ok(extract(&raster, &e.sign_id, config))
            })
            .collect::<Result<Vec<_>, HarnessError>>()?;
        let mut bk = Program::new();
        for f in &facts {
            bk.extend(f.facts.iter().cloned().map(Clause::fact));
        }
        let items = entries
            .iter()
            .map(|e| CorpusItem { sign_id: e.sign_id.clone(), positive: e.is_positive(), occlusion: e.occlusion })
            .collect();
        Ok(Corpus { bk, items })
    }
}

/// `traffic_sign(<id>, stop_sign)`.
pub fn example_atom(sign_id: &str) -> Atom {
    Atom::new(TARGET, vec![Term::sym(sign_id), Term::sym(STOP_CLASS)])
}
