use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Everything needed to reproduce an output. Embedded in every document and
/// as the first line of every CSV table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub inputs: Vec<String>,
    pub parameters: BTreeMap<String, Value>,
    pub threads: usize,
    pub deterministic: bool,
    /// Seconds since the Unix epoch; omitted in deterministic mode.
    pub timestamp: Option<u64>,
}

impl RunManifest {
    pub fn new(command: &str, deterministic: bool, threads: usize) -> Self {
        let timestamp = if deterministic {
            None
        } else {
            SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs())
        };
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            inputs: Vec::new(),
            parameters: BTreeMap::new(),
            threads,
            deterministic,
            timestamp,
        }
    }

    pub fn input(&mut self, path: &std::path::Path) {
        self.inputs.push(path.display().to_string());
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        self.parameters
            .insert(key.to_string(), serde_json::to_value(value).expect("parameter serializes"));
    }

    /// `# manifest: {...}` header line for CSV output.
    pub fn csv_line(&self) -> String {
        format!("# manifest: {}\n", serde_json::to_string(self).expect("manifest serializes"))
    }
}
