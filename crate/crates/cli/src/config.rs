//! Flat `key = value` config files merged under explicit flags.
//!
//! Keys are the long flag names of the chosen subcommand (`k-total` or
//! `k_total`). A value from the file is used only when the flag is absent
//! from the command line.

use std::ffi::OsString;
use std::path::Path;

use clap::Command;

#[derive(Debug, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn parse(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ConfigError(format!("config line {}: expected `key = value`", n + 1)))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError(format!(
                "config line {}: expected `key = value`",
                n + 1
            )));
        }
        if out.iter().any(|(k, _)| *k == key) {
            return Err(ConfigError(format!(
                "config line {}: duplicate key `{key}`",
                n + 1
            )));
        }
        out.push((key, value.to_string()));
    }
    Ok(out)
}

/// Finds `--config PATH` / `--config=PATH` and the first positional word.
fn scan(args: &[OsString]) -> (Option<OsString>, Option<String>) {
    let mut config = None;
    let mut sub = None;
    let mut i = 1;
    while i < args.len() {
        let a = args[i].to_string_lossy();
        if a == "--" {
            break;
        }
        if a == "--config" {
            config = args.get(i + 1).cloned();
            i += 2;
            continue;
        }
        if let Some(v) = a.strip_prefix("--config=") {
            config = Some(v.into());
        } else if sub.is_none() && !a.starts_with('-') {
            sub = Some(a.into_owned());
        }
        i += 1;
    }
    (config, sub)
}

fn given(args: &[OsString], long: &str) -> bool {
    let flag = format!("--{long}");
    let eq = format!("--{long}=");
    args.iter().any(|a| {
        let a = a.to_string_lossy();
        a == flag || a.starts_with(&eq)
    })
}

/// Returns `args` with config-file values appended for every flag not given.
pub fn merge(cmd: &Command, args: Vec<OsString>) -> Result<Vec<OsString>, ConfigError> {
    let (Some(path), Some(sub)) = scan(&args) else {
        return Ok(args);
    };
    let Some(subcmd) = cmd.find_subcommand(&sub) else {
        return Ok(args);
    };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
    let known: Vec<&str> = subcmd
        .get_arguments()
        .filter_map(|a| a.get_long())
        .filter(|l| *l != "config" && *l != "help")
        .collect();
    let mut out = args.clone();
    for (key, value) in parse(&text)? {
        if !known.contains(&key.as_str()) {
            return Err(ConfigError(format!(
                "unknown config key `{key}` for `{sub}` (expected one of: {})",
                known.join(", ")
            )));
        }
        if !given(&args, &key) {
            out.push(format!("--{key}").into());
            out.push(value.into());
        }
    }
    Ok(out)
}
