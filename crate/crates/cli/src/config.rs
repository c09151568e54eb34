//! Experiment configuration files.
//!
//! ```toml
//! [experiment]
//! name = "figure1"
//! model = "qm"            # qm | bell-constrained | factual | eight-partition
//! trials = 1000000
//! master_seed = 1
//!
//! [directions]            # planar degrees, or a 3-vector
//! a = 0
//! b = 60
//! c = [-0.5, 0.8660254037844386, 0.0]
//!
//! [scenarios]             # id = [alice, bob]
//! 1 = ["a", "b"]
//! 2 = ["a", "c"]
//! 3 = ["b", "c"]
//!
//! [output]
//! dir = "out"
//! formats = ["json", "csv"]
//! ```
//!
//! `partition_measures` (eight reals) and `domain_measures` (one per
//! scenario) are optional in `[experiment]`, as is
//! `path = "separate-functions" | "separate-times"`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use eprsim::models::EightPartition;
use eprsim::{Direction, MeasurementPath, SettingPair};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Qm,
    BellConstrained,
    Factual,
    EightPartition,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Qm => "qm",
            ModelKind::BellConstrained => "bell-constrained",
            ModelKind::Factual => "factual",
            ModelKind::EightPartition => "eight-partition",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum RawPath {
    #[default]
    SeparateFunctions,
    SeparateTimes,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment: RawExperiment,
    directions: BTreeMap<String, RawDirection>,
    scenarios: BTreeMap<String, (String, String)>,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExperiment {
    name: Option<String>,
    model: ModelKind,
    trials: u64,
    master_seed: u64,
    partition_measures: Option<[f64; 8]>,
    domain_measures: Option<Vec<f64>>,
    #[serde(default)]
    path: RawPath,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawDirection {
    Degrees(f64),
    Vector([f64; 3]),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    #[serde(default = "default_dir")]
    dir: PathBuf,
    #[serde(default = "default_formats")]
    formats: Vec<Format>,
}

impl Default for RawOutput {
    fn default() -> Self {
        RawOutput {
            dir: default_dir(),
            formats: default_formats(),
        }
    }
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_formats() -> Vec<Format> {
    vec![Format::Json, Format::Csv]
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub alice_label: String,
    pub bob_label: String,
    pub pair: SettingPair,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub model: ModelKind,
    pub trials: u64,
    pub master_seed: u64,
    pub partition: Option<EightPartition>,
    pub domain_measures: Option<Vec<f64>>,
    pub path: MeasurementPath,
    pub directions: BTreeMap<String, Direction>,
    /// Sorted by scenario id.
    pub scenarios: Vec<ScenarioSpec>,
    pub output_dir: PathBuf,
    pub formats: Vec<Format>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let fallback = path.file_stem().and_then(|s| s.to_str()).unwrap_or("experiment");
        Self::parse(&text, fallback)
    }

    /// Parses config text; `fallback_name` is used when `name` is absent.
    pub fn parse(text: &str, fallback_name: &str) -> CliResult<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let exp = raw.experiment;
        if exp.trials == 0 {
            return Err(CliError::Config("trials must be at least 1".into()));
        }

        let mut directions = BTreeMap::new();
        for (label, raw_dir) in raw.directions {
            let dir = match raw_dir {
                RawDirection::Degrees(deg) if deg.is_finite() => Direction::planar_degrees(deg),
                RawDirection::Degrees(deg) => {
                    return Err(CliError::Config(format!("direction {label}: {deg} is not an angle")))
                }
                RawDirection::Vector([x, y, z]) => {
                    Direction::new(x, y, z).map_err(|e| CliError::Config(format!("direction {label}: {e}")))?
                }
            };
            directions.insert(label, dir);
        }

        let mut scenarios = Vec::new();
        for (key, (alice, bob)) in raw.scenarios {
            let id: u32 = key
                .parse()
                .ok()
                .filter(|&id| id >= 1)
                .ok_or_else(|| CliError::Config(format!("scenario id {key:?} is not a positive integer")))?;
            let lookup = |label: &str| {
                directions
                    .get(label)
                    .copied()
                    .ok_or_else(|| CliError::Config(format!("scenario {id} refers to unknown direction {label:?}")))
            };
            let pair = SettingPair::new(id, lookup(&alice)?, lookup(&bob)?);
            scenarios.push(ScenarioSpec {
                alice_label: alice,
                bob_label: bob,
                pair,
            });
        }
        if scenarios.is_empty() {
            return Err(CliError::Config("no scenarios declared".into()));
        }
        scenarios.sort_by_key(|s| s.pair.scenario.0);
        if scenarios.windows(2).any(|w| w[0].pair.scenario == w[1].pair.scenario) {
            return Err(CliError::Config("scenario ids must be distinct".into()));
        }

        let partition = exp
            .partition_measures
            .map(EightPartition::new)
            .transpose()
            .map_err(|e| CliError::Config(format!("partition_measures: {e}")))?;
        if partition.is_some() && exp.model != ModelKind::EightPartition {
            return Err(CliError::Config("partition_measures only apply to the eight-partition model".into()));
        }
        if exp.domain_measures.is_some() && exp.model != ModelKind::Factual {
            return Err(CliError::Config("domain_measures only apply to the factual model".into()));
        }
        if raw.output.formats.is_empty() {
            return Err(CliError::Config("output.formats is empty".into()));
        }

        Ok(ExperimentConfig {
            name: exp.name.unwrap_or_else(|| fallback_name.to_string()),
            model: exp.model,
            trials: exp.trials,
            master_seed: exp.master_seed,
            partition,
            domain_measures: exp.domain_measures,
            path: match exp.path {
                RawPath::SeparateFunctions => MeasurementPath::SeparateFunctions,
                RawPath::SeparateTimes => MeasurementPath::SeparateTimes,
            },
            directions,
            scenarios,
            output_dir: raw.output.dir,
            formats: raw.output.formats,
        })
    }

    pub fn pairs(&self) -> Vec<SettingPair> {
        self.scenarios.iter().map(|s| s.pair).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
[experiment]
model = "qm"
trials = 1000
master_seed = 3

[directions]
a = 0
b = 60.0
c = [-0.5, 0.8660254037844386, 0.0]

[scenarios]
2 = ["a", "c"]
1 = ["a", "b"]
"#;

    #[test]
    fn parses_the_base_config() {
        let cfg = ExperimentConfig::parse(BASE, "base").unwrap();
        assert_eq!(cfg.name, "base");
        assert_eq!(cfg.model, ModelKind::Qm);
        assert_eq!(cfg.scenarios.len(), 2);
        assert_eq!(cfg.scenarios[0].pair.scenario.0, 1);
        assert!((cfg.scenarios[1].pair.angle() - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
        assert_eq!(cfg.formats, vec![Format::Json, Format::Csv]);
        assert_eq!(cfg.output_dir, PathBuf::from("out"));
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = [
            BASE.replace("trials = 1000", "trials = 0"),
            BASE.replace("[\"a\", \"c\"]", "[\"a\", \"z\"]"),
            BASE.replace("model = \"qm\"", "model = \"classical\""),
            BASE.replace("2 = [", "zero = ["),
            BASE.replace("master_seed = 3", "master_seed = 3\ncolour = 1"),
            BASE.replace("master_seed = 3", "master_seed = 3\npartition_measures = [1, 0, 0, 0, 0, 0, 0, 0]"),
            BASE.replace("c = [-0.5, 0.8660254037844386, 0.0]", "c = [0, 0, 0]"),
            "not toml at all [".to_string(),
        ];
        for text in bad {
            assert!(matches!(ExperimentConfig::parse(&text, "x"), Err(CliError::Config(_))), "{text}");
        }
    }

    #[test]
    fn partition_measures_validated() {
        let text = BASE.replace("\"qm\"", "\"eight-partition\"").replace(
            "master_seed = 3",
            "master_seed = 3\npartition_measures = [0.5, 0.5, 0.5, 0, 0, 0, 0, 0]",
        );
        assert!(matches!(ExperimentConfig::parse(&text, "x"), Err(CliError::Config(_))));
    }
}
