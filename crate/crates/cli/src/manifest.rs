//! Run manifests and output files.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct InputHash {
    pub path: String,
    pub sha256: String,
}

pub fn hash_file(path: &Path) -> Result<InputHash> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(InputHash {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    })
}

/// What a run did, written next to its outputs as `manifest.json`.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub inputs: Vec<InputHash>,
    pub seed: Option<u64>,
    pub toolkit_version: &'static str,
    pub outputs: Vec<String>,
    pub exit_code: u8,
    pub wall_time_secs: f64,
}

/// Collects the files a command writes and finishes with its manifest.
pub struct Run {
    command: &'static str,
    parameters: Value,
    dir: PathBuf,
    inputs: Vec<InputHash>,
    seed: Option<u64>,
    outputs: Vec<String>,
    started: Instant,
}

impl Run {
    pub fn new(command: &'static str, parameters: Value, dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Run {
            command,
            parameters,
            dir: dir.to_path_buf(),
            inputs: Vec::new(),
            seed: None,
            outputs: Vec::new(),
            started: Instant::now(),
        })
    }

    pub fn input(&mut self, path: &Path) -> Result<()> {
        self.inputs.push(hash_file(path)?);
        Ok(())
    }

    pub fn seed(&mut self, seed: u64) {
        self.seed = Some(seed);
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        log::info!("wrote {}", path.display());
        self.outputs.push(path.display().to_string());
        Ok(path)
    }

    pub fn write_text(&mut self, name: &str, text: &str) -> Result<PathBuf> {
        self.write_bytes(name, text.as_bytes())
    }

    pub fn write_json(&mut self, name: &str, value: &Value) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write_bytes(name, text.as_bytes())
    }

    pub fn finish(self, exit_code: u8) -> Result<()> {
        let path = self.dir.join("manifest.json");
        let mut outputs = self.outputs;
        outputs.push(path.display().to_string());
        let manifest = RunManifest {
            command: self.command.to_string(),
            parameters: self.parameters,
            inputs: self.inputs,
            seed: self.seed,
            toolkit_version: lucid_core::VERSION,
            outputs,
            exit_code,
            wall_time_secs: self.started.elapsed().as_secs_f64(),
        };
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
    }
}
