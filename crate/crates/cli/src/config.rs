//! Flag/config-file merging. Every subcommand's flags form one serde struct
//! whose fields are all optional; the JSON config file supplies the same
//! keys and flags given on the command line win.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

pub fn merge<T: Serialize + DeserializeOwned>(flags: &T, config: Option<&Path>) -> Result<T> {
    let Some(path) = config else {
        return Ok(serde_json::from_value(serde_json::to_value(flags)?)?);
    };
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let mut base: Map<String, Value> =
        serde_json::from_str(&text).with_context(|| format!("config {} is not a JSON object", path.display()))?;
    let Value::Object(over) = serde_json::to_value(flags)? else {
        bail!("flags do not form a JSON object");
    };
    if let Some(key) = base.keys().find(|k| !over.contains_key(*k)) {
        bail!("unknown key `{key}` in config {}", path.display());
    }
    for (key, v) in over {
        if !v.is_null() {
            base.insert(key, v);
        }
    }
    serde_json::from_value(Value::Object(base)).with_context(|| format!("invalid config {}", path.display()))
}

/// Parses `lo..hi`, `lo..=hi` or a single value as an inclusive range.
pub fn parse_span(s: &str) -> std::result::Result<(usize, usize), String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        Ok((num(a)?, num(b)?))
    } else {
        let v = num(s)?;
        Ok((v, v))
    }
}
