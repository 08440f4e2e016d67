//! Per-run output directories and the `manifest.json` written into each.
//!
//! Everything in a manifest except the `run` block is a function of the
//! inputs and the effective configuration.

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputFile {
    /// As given, or `bundled` for a built-in registry.
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inputs {
    pub flows: InputFile,
    pub countries: InputFile,
    pub sectors: InputFile,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputFile {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Versions {
    pub regomax: &'static str,
    pub regomax_core: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunInfo {
    pub started_unix_ms: u128,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub command: String,
    pub run_id: String,
    pub versions: Versions,
    pub inputs: Inputs,
    pub alpha: f64,
    pub config: RunConfig,
    pub params: serde_json::Value,
    pub results: serde_json::Value,
    pub outputs: Vec<OutputFile>,
    pub run: RunInfo,
}

/// Run identifier: a digest of the command, the input files and the
/// effective configuration.
pub fn run_id(command: &str, inputs: &Inputs, config: &RunConfig) -> Result<String> {
    let mut h = Sha256::new();
    for part in [
        command,
        &inputs.flows.sha256,
        &inputs.countries.sha256,
        &inputs.sectors.sha256,
    ] {
        h.update(part.as_bytes());
        h.update([0]);
    }
    h.update(serde_json::to_vec(config)?);
    Ok(hex::encode(&h.finalize()[..8]))
}

/// Files of one run, written as they are produced.
pub struct RunDir {
    pub dir: PathBuf,
    pub command: String,
    pub run_id: String,
    files: Vec<OutputFile>,
    started: SystemTime,
    clock: Instant,
}

impl RunDir {
    /// Creates `<root>/<run_id>-<command>`. An existing directory is an
    /// error unless `force`, in which case it is replaced.
    pub fn create(root: &Path, command: &str, run_id: String, force: bool) -> Result<Self> {
        let dir = root.join(format!("{run_id}-{command}"));
        if dir.exists() {
            if !force {
                return Err(Error::usage(format!(
                    "{} already exists; pass --force to replace it",
                    dir.display()
                )));
            }
            std::fs::remove_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        }
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(RunDir {
            dir,
            command: command.to_string(),
            run_id,
            files: Vec::new(),
            started: SystemTime::now(),
            clock: Instant::now(),
        })
    }

    /// Renders a file in memory, then writes it under the run directory.
    pub fn write(
        &mut self,
        relative: &str,
        render: impl FnOnce(&mut Vec<u8>) -> Result<()>,
    ) -> Result<()> {
        let mut bytes = Vec::new();
        render(&mut bytes)?;
        let path = self.dir.join(relative);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        std::fs::write(&path, &bytes).map_err(|e| Error::io(&path, e))?;
        self.files.push(OutputFile {
            path: relative.to_string(),
            bytes: bytes.len(),
            sha256: sha256_hex(&bytes),
        });
        Ok(())
    }

    pub fn finish(
        mut self,
        inputs: Inputs,
        config: RunConfig,
        params: serde_json::Value,
        results: serde_json::Value,
    ) -> Result<(PathBuf, Manifest)> {
        self.files.sort_by(|a, b| a.path.cmp(&b.path));
        let manifest = Manifest {
            command: self.command,
            run_id: self.run_id,
            versions: Versions {
                regomax: env!("CARGO_PKG_VERSION"),
                regomax_core: regomax_core::VERSION,
            },
            inputs,
            alpha: config.alpha,
            config,
            params,
            results,
            outputs: self.files,
            run: RunInfo {
                started_unix_ms: self
                    .started
                    .duration_since(UNIX_EPOCH)
                    .map_or(0, |d| d.as_millis()),
                elapsed_ms: self.clock.elapsed().as_millis(),
            },
        };
        let path = self.dir.join(MANIFEST_FILE);
        let mut bytes = serde_json::to_vec_pretty(&manifest)?;
        bytes.push(b'\n');
        std::fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
        Ok((self.dir, manifest))
    }
}
