//! Run manifests: the resolved configuration, input-file digests, and tool
//! version, written as sorted key=value text next to every results file.
//! Re-running a command with `--config <manifest>` reproduces its output
//! byte for byte.

use crate::CliError;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// FNV-1a 64-bit content hash.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xCBF2_9CE4_8422_2325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01B3);
    }
    hash
}

#[derive(Debug, Default)]
pub struct Manifest {
    entries: BTreeMap<String, String>,
}

impl Manifest {
    pub fn new(command: &str) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert("command".to_string(), command.to_string());
        entries.insert(
            "tool.version".to_string(),
            env!("CARGO_PKG_VERSION").to_string(),
        );
        Manifest { entries }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.insert(key.to_string(), value.to_string());
        self
    }

    /// Records `input.<name>.digest` from the file's content hash.
    pub fn digest_input(&mut self, name: &str, path: &Path) -> Result<&mut Self, CliError> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::Runtime(format!("cannot digest {}: {e}", path.display())))?;
        self.entries.insert(
            format!("input.{name}.digest"),
            format!("{:016x}", fnv1a64(&bytes)),
        );
        Ok(self)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.entries {
            out.push_str(key);
            out.push('=');
            out.push_str(value);
            out.push('\n');
        }
        out
    }

    /// Writes `<results>.manifest` next to the results file.
    pub fn write_beside(&self, results_path: &Path) -> Result<PathBuf, CliError> {
        let mut path = results_path.as_os_str().to_owned();
        path.push(".manifest");
        let path = PathBuf::from(path);
        std::fs::write(&path, self.to_text())?;
        Ok(path)
    }
}
