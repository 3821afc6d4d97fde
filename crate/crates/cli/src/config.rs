//! Plain-text config files: one `key = value` per line, keys matching the
//! long flag names. Flags override config values; unknown keys are errors.

use crate::error::CliError;
use std::collections::HashMap;
use std::str::FromStr;

pub struct ConfigMap {
    values: HashMap<String, String>,
}

impl ConfigMap {
    /// Loads the file if given and rejects keys outside `allowed`.
    pub fn load(path: Option<&str>, allowed: &[&str]) -> Result<Self, CliError> {
        let mut values = HashMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("cannot read config '{path}': {e}")))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let Some((key, value)) = line.split_once('=') else {
                    return Err(CliError::usage(format!(
                        "{path}:{}: expected 'key = value', got '{line}'",
                        lineno + 1
                    )));
                };
                let key = key.trim();
                if !allowed.contains(&key) {
                    return Err(CliError::usage(format!(
                        "{path}:{}: unknown key '{key}'",
                        lineno + 1
                    )));
                }
                values.insert(key.to_string(), value.trim().to_string());
            }
        }
        Ok(Self { values })
    }

    /// Flag value if present, else the config value, else `None`.
    pub fn optional<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| CliError::usage(format!("config key '{key}': {e}"))),
            None => Ok(None),
        }
    }

    /// Like [`Self::optional`] but the value must come from somewhere.
    pub fn required<T>(&self, flag: Option<T>, key: &str) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        self.optional(flag, key)?
            .ok_or_else(|| CliError::usage(format!("missing required parameter --{key}")))
    }
}
