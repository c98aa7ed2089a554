//! Artifact directory layout, JSON IO and hashing.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const CURVE: &str = "curve.json";
pub const CSS: &str = "css.json";
pub const GATES: &str = "gates.json";
pub const SCHEDULE: &str = "schedule.json";
pub const CERTIFICATE: &str = "certificate.json";
pub const REPORT: &str = "report.json";

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Pretty JSON with a trailing newline. Reloading and re-rendering gives the same bytes.
pub fn render<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub struct ArtifactDir {
    root: PathBuf,
}

impl ArtifactDir {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        ArtifactDir { root: root.into() }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn exists(&self, name: &str) -> bool {
        self.path(name).is_file()
    }

    pub fn write<T: Serialize>(&self, name: &str, value: &T) -> anyhow::Result<PathBuf> {
        fs::create_dir_all(&self.root)
            .with_context(|| format!("creating {}", self.root.display()))?;
        let path = self.path(name);
        fs::write(&path, render(value)?).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }

    pub fn read<T: DeserializeOwned>(&self, name: &str) -> anyhow::Result<T> {
        read_json(&self.path(name))
    }

    pub fn sha256(&self, name: &str) -> anyhow::Result<String> {
        let bytes = fs::read(self.path(name)).with_context(|| format!("reading {name}"))?;
        Ok(hex::encode(Sha256::digest(bytes)))
    }

    /// Hashes of the named artifacts that exist.
    pub fn hashes(&self, names: &[&str]) -> anyhow::Result<BTreeMap<String, String>> {
        names
            .iter()
            .filter(|n| self.exists(n))
            .map(|&n| Ok((n.to_string(), self.sha256(n)?)))
            .collect()
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}
