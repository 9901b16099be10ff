use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{DwmError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioId {
    Fig2,
    Fig3,
    Fig4a,
    Fig4b,
    Fig4c,
    Fig4d,
    Fig5a,
    Fig5b,
    Fig5c,
    Custom,
}

impl ScenarioId {
    pub const BUILT_IN: [ScenarioId; 9] = [
        ScenarioId::Fig2,
        ScenarioId::Fig3,
        ScenarioId::Fig4a,
        ScenarioId::Fig4b,
        ScenarioId::Fig4c,
        ScenarioId::Fig4d,
        ScenarioId::Fig5a,
        ScenarioId::Fig5b,
        ScenarioId::Fig5c,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioId::Fig2 => "fig2",
            ScenarioId::Fig3 => "fig3",
            ScenarioId::Fig4a => "fig4a",
            ScenarioId::Fig4b => "fig4b",
            ScenarioId::Fig4c => "fig4c",
            ScenarioId::Fig4d => "fig4d",
            ScenarioId::Fig5a => "fig5a",
            ScenarioId::Fig5b => "fig5b",
            ScenarioId::Fig5c => "fig5c",
            ScenarioId::Custom => "custom",
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioId {
    type Err = DwmError;

    /// Accepts `fig4d`, `Fig4d`, `4d`.
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        let key = key.strip_prefix("fig").unwrap_or(&key);
        if key == "custom" {
            return Ok(ScenarioId::Custom);
        }
        ScenarioId::BUILT_IN
            .into_iter()
            .find(|id| &id.name()[3..] == key)
            .ok_or_else(|| DwmError::Config(format!("unknown scenario id `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = DwmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(DwmError::Config(format!("unknown format `{other}`"))),
        }
    }
}

/// Initial state of an evolution scenario.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum InitialState {
    /// Lowest mode of the rest-frame well.
    Ground,
    /// First excited (odd) mode.
    Excited,
    /// Amplitudes read from a state CSV (`n,re,im` rows).
    File(PathBuf),
}

impl FromStr for InitialState {
    type Err = DwmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "ground" => Ok(InitialState::Ground),
            "excited" => Ok(InitialState::Excited),
            other => match other.strip_prefix("file:") {
                Some(p) if !p.is_empty() => Ok(InitialState::File(PathBuf::from(p))),
                _ => Err(DwmError::Config(format!(
                    "initial state must be ground, excited or file:<path>, got `{other}`"
                ))),
            },
        }
    }
}

impl TryFrom<String> for InitialState {
    type Error = DwmError;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<InitialState> for String {
    fn from(s: InitialState) -> String {
        match s {
            InitialState::Ground => "ground".into(),
            InitialState::Excited => "excited".into(),
            InitialState::File(p) => format!("file:{}", p.display()),
        }
    }
}

/// Whether the co-moving gauge factor is imprinted on the initial state.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoostPhase {
    #[default]
    Auto,
    None,
}

impl FromStr for BoostPhase {
    type Err = DwmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "auto" => Ok(BoostPhase::Auto),
            "none" => Ok(BoostPhase::None),
            other => Err(DwmError::Config(format!(
                "boost phase must be auto or none, got `{other}`"
            ))),
        }
    }
}

/// Keys accepted in `overrides`.
pub const OVERRIDE_KEYS: [&str; 10] = [
    "sites", "nu", "ratio", "velocity", "omega_a2", "dt", "tmax", "center", "window", "stride",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub id: ScenarioId,
    #[serde(default)]
    pub overrides: BTreeMap<String, f64>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: BTreeSet<OutputFormat>,
    /// Replaces the scenario's own initial state.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<InitialState>,
    #[serde(default)]
    pub boost_phase: BoostPhase,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_formats() -> BTreeSet<OutputFormat> {
    [OutputFormat::Csv, OutputFormat::Json]
        .into_iter()
        .collect()
}

impl ScenarioConfig {
    pub fn new(id: ScenarioId) -> Self {
        Self {
            id,
            overrides: BTreeMap::new(),
            output_dir: default_output_dir(),
            formats: default_formats(),
            init: None,
            boost_phase: BoostPhase::Auto,
        }
    }

    pub fn with_override(mut self, key: &str, value: f64) -> Self {
        self.overrides.insert(key.to_string(), value);
        self
    }

    pub fn with_output_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.output_dir = dir.into();
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Overlay `other`'s overrides on top of ours (theirs win).
    pub fn merge_overrides(&mut self, other: &BTreeMap<String, f64>) {
        for (k, v) in other {
            self.overrides.insert(k.clone(), *v);
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (k, v) in &self.overrides {
            if !OVERRIDE_KEYS.contains(&k.as_str()) {
                return Err(DwmError::Config(format!(
                    "unknown override `{k}` (expected one of {})",
                    OVERRIDE_KEYS.join(", ")
                )));
            }
            if !v.is_finite() {
                return Err(DwmError::Config(format!("override `{k}` must be finite")));
            }
        }
        if self.formats.is_empty() {
            return Err(DwmError::Config(
                "at least one output format is required".into(),
            ));
        }
        Ok(())
    }

    pub fn wants(&self, format: OutputFormat) -> bool {
        self.formats.contains(&format)
    }

    pub(crate) fn get(&self, key: &str) -> Option<f64> {
        self.overrides.get(key).copied()
    }

    pub(crate) fn get_or(&self, key: &str, default: f64) -> f64 {
        self.get(key).unwrap_or(default)
    }

    pub(crate) fn get_count(&self, key: &str, default: usize) -> Result<usize> {
        match self.get(key) {
            None => Ok(default),
            Some(v) if v >= 1.0 && v.fract() == 0.0 => Ok(v as usize),
            Some(v) => Err(DwmError::Config(format!(
                "override `{key}` must be a positive integer, got {v}"
            ))),
        }
    }

    pub fn scenario_dir(&self) -> PathBuf {
        self.output_dir.join(self.id.name())
    }
}
