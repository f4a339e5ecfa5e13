//! Command-line and HTTP front ends for the question answering engine.

use std::path::Path;

use qa_core::EngineConfig;

pub mod server;

pub const DEFAULT_CONFIG: &str = "qa.config";

/// The explicit config file, else `./qa.config` when present, else defaults.
pub fn load_config(explicit: Option<&Path>) -> anyhow::Result<EngineConfig> {
    if let Some(path) = explicit {
        return Ok(EngineConfig::load(path)?);
    }
    let default = Path::new(DEFAULT_CONFIG);
    if default.is_file() {
        return Ok(EngineConfig::load(default)?);
    }
    Ok(EngineConfig::default())
}
