use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{ScenarioConfig, SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct TaskReport {
    pub name: String,
    pub status: Status,
    pub counts: BTreeMap<String, Value>,
    pub witnesses: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct TaskTiming {
    pub name: String,
    pub seconds: f64,
}

/// Everything that varies between identical runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Timing {
    pub started_unix_seconds: u64,
    pub total_seconds: f64,
    pub tasks: Vec<TaskTiming>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Report {
    pub schema: u32,
    pub scenario: ScenarioConfig,
    pub status: Status,
    pub tasks: Vec<TaskReport>,
    pub timing: Timing,
}

impl Report {
    pub fn new(scenario: ScenarioConfig, tasks: Vec<TaskReport>, timing: Timing) -> Self {
        let status = if tasks.iter().all(|t| t.status == Status::Pass) {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            schema: SCHEMA_VERSION,
            scenario,
            status,
            tasks,
            timing,
        }
    }

    pub fn task(&self, name: &str) -> Option<&TaskReport> {
        self.tasks.iter().find(|t| t.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// The report with the `timing` key removed.
    pub fn deterministic_part(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().unwrap().remove("timing");
        v
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            _ => 1,
        }
    }
}

/// Counts and witnesses collected by one task.
#[derive(Debug, Default)]
pub struct Sheet {
    pub counts: BTreeMap<String, Value>,
    pub witnesses: BTreeMap<String, Value>,
}

impl Sheet {
    pub fn count(&mut self, key: &str, v: impl Serialize) {
        self.counts
            .insert(key.to_string(), serde_json::to_value(v).expect("count serializes"));
    }

    pub fn witness(&mut self, key: &str, v: impl Serialize) {
        self.witnesses
            .insert(key.to_string(), serde_json::to_value(v).expect("witness serializes"));
    }
}
