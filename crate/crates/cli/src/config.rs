//! `key = value` job files; `#` starts a comment.

use std::collections::BTreeMap;

use crate::error::{CliError, CliResult};

pub fn parse_config(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| CliError::Config {
            line: k + 1,
            msg: format!("expected key = value, got {line:?}"),
        })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(CliError::Config {
                line: k + 1,
                msg: "empty key".into(),
            });
        }
        out.insert(key.replace('-', "_"), value.trim().to_string());
    }
    Ok(out)
}
