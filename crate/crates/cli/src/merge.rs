//! JSON config files overlaid with command-line flags.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

/// The config file as a JSON object, or an empty one.
pub fn load_object(config: Option<&Path>) -> Result<Map<String, Value>> {
    let Some(path) = config else {
        return Ok(Map::new());
    };
    let text =
        fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    match serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))? {
        Value::Object(map) => Ok(map),
        _ => bail!("config {} must be a JSON object", path.display()),
    }
}

/// Every non-null field of `flags` replaces the config entry of the same
/// name; the result is read back as `T`.
pub fn merged<T: DeserializeOwned>(config: Option<&Path>, flags: &impl Serialize) -> Result<T> {
    let mut base = load_object(config)?;
    if let Value::Object(given) = serde_json::to_value(flags)? {
        for (k, v) in given {
            if !v.is_null() {
                base.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(base)).context("invalid options")
}
