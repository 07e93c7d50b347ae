use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// Everything needed to rerun a command and find what it wrote.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub config: Value,
    pub seed: Option<u64>,
    pub version: String,
    pub started: DateTime<Utc>,
    pub finished: DateTime<Utc>,
    pub outputs: Vec<PathBuf>,
    pub exit_code: u8,
}

pub struct Run {
    command: String,
    started: DateTime<Utc>,
    pub config: Value,
    pub seed: Option<u64>,
    pub outputs: Vec<PathBuf>,
    /// Output directory, where the manifest goes unless told otherwise.
    pub home: Option<PathBuf>,
}

impl Run {
    pub fn start(command: &str) -> Self {
        Self {
            command: command.to_string(),
            started: Utc::now(),
            config: Value::Null,
            seed: None,
            outputs: Vec::new(),
            home: None,
        }
    }

    pub fn finish(self, exit_code: u8) -> RunManifest {
        RunManifest {
            command: self.command,
            argv: std::env::args().collect(),
            config: self.config,
            seed: self.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            started: self.started,
            finished: Utc::now(),
            outputs: self.outputs,
            exit_code,
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("serialisable output");
    std::fs::write(path, text + "\n").map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}
