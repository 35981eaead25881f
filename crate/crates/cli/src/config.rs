//! key=value config files. Values merge UNDER explicit flags (a flag always
//! wins), which makes a run manifest directly reusable as a config: its
//! informational keys (`command`, `tool.*`, `input.*`) are ignored on load.

use crate::CliError;
use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Clone, Default)]
pub struct ConfigMap {
    values: BTreeMap<String, String>,
}

/// Keys every command accepts from a config file.
const KNOWN_KEYS: &[&str] = &[
    "pool",
    "init",
    "test",
    "strategy",
    "batch",
    "budget",
    "epsilon",
    "learner",
    "hidden-units",
    "learning-rate",
    "epochs",
    "l2",
    "repr",
    "seed",
    "out",
    "train",
    "target-size",
    "eval",
    "n",
    "queries",
    "test-n",
    "instances",
    "max-n",
    "max-k",
];

impl ConfigMap {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key=value", idx + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            if key == "command" || key.starts_with("tool.") || key.starts_with("input.") {
                continue; // manifest bookkeeping, not configuration
            }
            if !KNOWN_KEYS.contains(&key) {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key '{key}'",
                    idx + 1
                )));
            }
            values.insert(key.to_string(), value.to_string());
        }
        Ok(ConfigMap { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Resolves a flag against the config: the flag wins, else the config
    /// value is parsed, else `None`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.get(key) {
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config key '{key}': {e}"))),
            None => Ok(None),
        }
    }
}
