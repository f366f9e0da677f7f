use std::path::Path;
use std::time::Duration;

use serde::Serialize;

use crate::error::CliError;
use crate::format::{write_text, OutputFile};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Everything needed to regenerate the outputs of one invocation.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub outputs: Vec<OutputFile>,
    pub wall_clock_seconds: f64,
}

impl RunManifest {
    pub fn new(command: &str, seed: u64, config: serde_json::Value, outputs: Vec<OutputFile>, elapsed: Duration) -> Self {
        RunManifest {
            tool: env!("CARGO_BIN_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed,
            config,
            outputs,
            wall_clock_seconds: elapsed.as_secs_f64(),
        }
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        let path = dir.join(MANIFEST_FILE);
        let text = serde_json::to_string_pretty(self).map_err(|e| CliError::io(&path, e))?;
        write_text(&path, &(text + "\n"))
    }
}
