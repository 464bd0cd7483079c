use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct OutputDigest {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config: Value,
    /// Effective settings after defaults were filled in.
    #[serde(skip_serializing_if = "Value::is_null")]
    pub resolved: Value,
    pub seed: Option<u64>,
    pub version: String,
    pub started_unix: u64,
    pub wall_clock_s: f64,
    pub outputs: Vec<OutputDigest>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Collects output paths during a run and writes the manifest at the end.
pub struct Recorder {
    subcommand: String,
    config: Value,
    resolved: Value,
    seed: Option<u64>,
    started_unix: u64,
    start: Instant,
    outputs: Vec<PathBuf>,
}

impl Recorder {
    pub fn new(subcommand: &str, config: &impl Serialize, seed: Option<u64>) -> Result<Self> {
        Ok(Recorder {
            subcommand: subcommand.into(),
            config: serde_json::to_value(config)?,
            resolved: Value::Null,
            seed,
            started_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            start: Instant::now(),
            outputs: Vec::new(),
        })
    }

    pub fn resolved(&mut self, v: &impl Serialize) -> Result<()> {
        self.resolved = serde_json::to_value(v)?;
        Ok(())
    }

    /// Writes `bytes` to `path` and remembers it for the manifest.
    pub fn write(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.track(path);
        Ok(())
    }

    pub fn track(&mut self, path: &Path) {
        if !self.outputs.iter().any(|p| p == path) {
            self.outputs.push(path.to_path_buf());
        }
    }

    pub fn finish(self, manifest: &Path) -> Result<()> {
        let mut outputs = Vec::new();
        for path in &self.outputs {
            let bytes = std::fs::read(path).with_context(|| format!("hashing {}", path.display()))?;
            outputs.push(OutputDigest {
                path: path.display().to_string(),
                sha256: sha256_hex(&bytes),
                bytes: bytes.len() as u64,
            });
        }
        let m = RunManifest {
            subcommand: self.subcommand,
            config: self.config,
            resolved: self.resolved,
            seed: self.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix: self.started_unix,
            wall_clock_s: self.start.elapsed().as_secs_f64(),
            outputs,
        };
        let mut text = serde_json::to_string_pretty(&m)?;
        text.push('\n');
        std::fs::write(manifest, text).with_context(|| format!("writing {}", manifest.display()))
    }
}

/// Default manifest location next to an output file.
pub fn default_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }
}
