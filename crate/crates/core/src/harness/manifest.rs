//! Per-run manifest: flat key-value text next to the trace.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MANIFEST_SCHEMA: &str = "polargrad-manifest v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub schema: String,
    pub name: String,
    pub problem: String,
    pub problem_id: String,
    pub optimizer: String,
    pub seed: u64,
    pub generator: String,
    pub artifact_version: String,
    pub config_hash: String,
    pub total_steps: usize,
    pub steps_completed: usize,
    pub final_loss: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub final_gap: Option<f64>,
    pub diverged: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub halt_step: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub halt_reason: Option<String>,
    pub descent_violations: usize,
    pub trace_file: String,
    pub wall_ms: f64,
}

pub fn artifact_version() -> String {
    format!("polargrad-{}", env!("CARGO_PKG_VERSION"))
}

impl Manifest {
    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("manifest serializes")
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let m: Self = toml::from_str(text).map_err(|e| Error::Trace(format!("manifest: {e}")))?;
        if m.schema != MANIFEST_SCHEMA {
            return Err(Error::Trace(format!("manifest schema {:?}, expected {MANIFEST_SCHEMA:?}", m.schema)));
        }
        Ok(m)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}
