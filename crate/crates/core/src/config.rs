//! Flat `key = value` configuration files (TOML syntax) with command-line
//! overrides of the form `key=value`.

use std::path::Path;

use serde::de::DeserializeOwned;

use crate::{Error, Result};

/// Parses `text`, applies `overrides` on top and deserializes the result.
///
/// Override values are read as TOML values (`3`, `0.5`, `[1, 2]`,
/// `"quantile"`); anything that does not parse is taken as a bare string.
pub fn parse_with_overrides<T: DeserializeOwned>(text: &str, overrides: &[String]) -> Result<T> {
    let mut table: toml::Table = text.parse().map_err(|e| Error::Config(format!("{e}")))?;
    for item in overrides {
        let (key, raw) = item
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override {item:?} is not of the form key=value")))?;
        let key = key.trim();
        let raw = raw.trim();
        let value = match format!("v = {raw}").parse::<toml::Table>() {
            Ok(mut t) => t.remove("v").expect("key just written"),
            Err(_) => toml::Value::String(raw.to_string()),
        };
        table.insert(key.to_string(), value);
    }
    T::deserialize(table).map_err(|e| Error::Config(format!("{e}")))
}

/// Reads a configuration file and applies overrides.
pub fn load<T: DeserializeOwned>(path: &Path, overrides: &[String]) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_with_overrides(&text, overrides).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}
