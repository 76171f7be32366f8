//! Run manifests: enough to repeat a run and check its output.

use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Every command is deterministic, so the seed is fixed and only echoed.
const SEED: u64 = 0;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub schema: u32,
    pub command: String,
    /// Arguments as given, without the manifest option itself.
    pub parameters: Vec<String>,
    pub version: String,
    pub seed: u64,
    /// SHA-256 of the primary output, hex encoded.
    pub output_sha256: String,
}

impl RunManifest {
    pub fn new(command: &str, args: &[String], stdout: &str) -> Self {
        let mut parameters = Vec::new();
        let mut skip = false;
        for a in args {
            if skip {
                skip = false;
            } else if a == "--manifest" {
                skip = true;
            } else if !a.starts_with("--manifest=") {
                parameters.push(a.clone());
            }
        }
        RunManifest {
            schema: 1,
            command: command.to_string(),
            parameters,
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: SEED,
            output_sha256: hex::encode(Sha256::digest(stdout.as_bytes())),
        }
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        let mut text = serde_json::to_string_pretty(self).map_err(io::Error::other)?;
        text.push('\n');
        fs::write(path, text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_drops_its_own_path() {
        let args: Vec<String> = ["verify", "--manifest", "m.json", "--file", "w.txt"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let m = RunManifest::new("verify", &args, "verdict: exact-cover\n");
        assert_eq!(m.parameters, vec!["verify", "--file", "w.txt"]);
        assert_eq!(m.output_sha256.len(), 64);
        let again = RunManifest::new("verify", &args, "verdict: exact-cover\n");
        assert_eq!(m.output_sha256, again.output_sha256);
    }
}
