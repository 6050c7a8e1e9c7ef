use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{FileConfig, SeedSource};
use crate::error::{CliError, Result};

pub const RECORD_FILE: &str = "run_record.toml";
pub const CONFIG_SNAPSHOT_FILE: &str = "config.toml";

/// Provenance of one run, written next to its outputs.
///
/// `config` holds every run-affecting input, including the resolved seed;
/// feeding it back through `--config` reproduces the same checksums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub version: String,
    #[serde(with = "crate::seed_serde")]
    pub seed: u64,
    pub seed_source: SeedSource,
    pub duration_secs: f64,
    /// SHA-256 of every emitted file, keyed by file name.
    pub checksums: BTreeMap<String, String>,
    pub config: FileConfig,
}

impl RunRecord {
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(RECORD_FILE);
        let text = toml::to_string(self).expect("run record always serializes");
        std::fs::write(&path, text).map_err(CliError::io(&path))?;
        Ok(path)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        toml::from_str(&text).map_err(|e| CliError::data(path, e.message()))
    }
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(CliError::io(path))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Checksums keyed by path relative to `base`.
pub fn checksums(base: &Path, files: &[PathBuf]) -> Result<BTreeMap<String, String>> {
    files
        .iter()
        .map(|f| {
            let key = f.strip_prefix(base).unwrap_or(f).display().to_string();
            Ok((key, sha256_file(f)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_known_value() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("abc");
        std::fs::write(&p, "abc").unwrap();
        assert_eq!(
            sha256_file(&p).unwrap(),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn record_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let rec = RunRecord {
            version: "0.1.0".into(),
            seed: u64::MAX,
            seed_source: SeedSource::Entropy,
            duration_secs: 1.25,
            checksums: [("a.csv".to_string(), "00".to_string())].into(),
            config: FileConfig {
                lambda: Some(10.0),
                seed: Some(u64::MAX),
                ..Default::default()
            },
        };
        let path = rec.write(dir.path()).unwrap();
        assert_eq!(RunRecord::read(&path).unwrap(), rec);
    }
}
