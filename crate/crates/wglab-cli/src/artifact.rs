//! Deterministic artifact emission.
//!
//! Every artifact embeds the tool version, the resolved mathematical
//! configuration, and a hash of both, so a rerun with the same config and
//! seed is byte-identical. Execution knobs (worker count, output path) are
//! deliberately not part of the identity.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use wglab::Result;

pub const TOOL: &str = "wglab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
pub struct Artifact<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: serde_json::Value,
    pub seed: u64,
    pub config_sha256: String,
    pub data: T,
}

pub fn config_hash(command: &str, config: &serde_json::Value, seed: u64) -> String {
    let mut h = Sha256::new();
    h.update(TOOL.as_bytes());
    h.update(VERSION.as_bytes());
    h.update(command.as_bytes());
    h.update(config.to_string().as_bytes());
    h.update(seed.to_le_bytes());
    let digest = h.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

impl<T: Serialize> Artifact<T> {
    pub fn new(command: &'static str, config: serde_json::Value, seed: u64, data: T) -> Self {
        let config_sha256 = config_hash(command, &config, seed);
        Artifact { tool: TOOL, version: VERSION, command, config, seed, config_sha256, data }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("artifact serialization");
        s.push('\n');
        s
    }

    /// CSV header comment lines carrying the same identity as the JSON form.
    pub fn csv_header(&self) -> String {
        format!(
            "# tool={TOOL}\n# version={VERSION}\n# command={}\n# config={}\n# seed={}\n# config_sha256={}\n",
            self.command, self.config, self.seed, self.config_sha256
        )
    }
}

/// Write to the path or stdout; file writes are atomic via rename.
pub fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
            fs::write(&tmp, content)?;
            fs::rename(&tmp, path)?;
            Ok(())
        }
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
            Ok(())
        }
    }
}
