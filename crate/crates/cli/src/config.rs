use std::fmt;
use std::str::FromStr;

use chaingeom::ring::{Embedding, RingSpec};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_SAMPLES: usize = 10_000;

/// Registered task names, in the order a full scenario runs them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TaskName {
    EnumeratePoints,
    DistantGraph,
    ChainOrbit,
    DualitySuite,
    Vergleich,
    PartialAffine,
    DerivePlane,
    SigmaSuite,
}

impl TaskName {
    pub const ALL: [TaskName; 8] = [
        TaskName::EnumeratePoints,
        TaskName::DistantGraph,
        TaskName::ChainOrbit,
        TaskName::DualitySuite,
        TaskName::Vergleich,
        TaskName::PartialAffine,
        TaskName::DerivePlane,
        TaskName::SigmaSuite,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TaskName::EnumeratePoints => "enumerate-points",
            TaskName::DistantGraph => "distant-graph",
            TaskName::ChainOrbit => "chain-orbit",
            TaskName::DualitySuite => "duality-suite",
            TaskName::Vergleich => "vergleich",
            TaskName::PartialAffine => "partial-affine",
            TaskName::DerivePlane => "derive-plane",
            TaskName::SigmaSuite => "sigma-suite",
        }
    }
}

impl fmt::Display for TaskName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TaskName {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        TaskName::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| CliError::Config(format!("unknown task `{s}`")))
    }
}

/// A task given either by name or with options.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TaskEntry {
    Name(String),
    Detailed(TaskOptions),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct TaskOptions {
    pub name: String,
    /// Largest orbit any enumeration may reach.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    /// Seed for sampled checks on rings too large for exhaustive loops.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Base field order for `derive-plane`; defaults to the scenario ring's.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
}

impl TaskEntry {
    pub fn options(&self) -> TaskOptions {
        match self {
            TaskEntry::Name(n) => TaskOptions {
                name: n.clone(),
                ..Default::default()
            },
            TaskEntry::Detailed(o) => o.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct OutputConfig {
    #[serde(default = "default_report")]
    pub report: String,
    /// Write `distant-graph.dot` next to the report.
    #[serde(default)]
    pub dot: bool,
}

fn default_report() -> String {
    "report.json".into()
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            report: default_report(),
            dot: false,
        }
    }
}

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ScenarioConfig {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub ring: RingSpec,
    pub subfield: Embedding,
    pub tasks: Vec<TaskEntry>,
    #[serde(default)]
    pub output: OutputConfig,
}

/// A task with its resolved options.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlannedTask {
    pub name: TaskName,
    pub options: TaskOptions,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Checks the schema and task names; ring and subfield are checked when
    /// the scenario is built.
    pub fn plan(&self) -> Result<Vec<PlannedTask>, CliError> {
        if self.schema != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "schema {} is not supported (expected {SCHEMA_VERSION})",
                self.schema
            )));
        }
        if self.tasks.is_empty() {
            return Err(CliError::Config("no tasks given".into()));
        }
        if self.output.report.is_empty() {
            return Err(CliError::Config("empty report file name".into()));
        }
        self.tasks
            .iter()
            .map(|t| {
                let options = t.options();
                let name: TaskName = options.name.parse()?;
                if options.samples == Some(0) {
                    return Err(CliError::Config(format!("{name}: samples must be positive")));
                }
                if options.cap == Some(0) {
                    return Err(CliError::Config(format!("{name}: cap must be positive")));
                }
                Ok(PlannedTask { name, options })
            })
            .collect()
    }
}
