//! Flat `key = value` config files. Each key names a long flag of the chosen
//! subcommand; the expanded flags go before the command-line ones, so flags
//! given on the command line win.
//!
//! ```text
//! # toy run
//! mu = 0.1,1
//! seeds = 50
//! strict = true
//! ```

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("config line {}: expected key = value", i + 1);
        };
        let k = k.trim().trim_start_matches("--");
        if k.is_empty() || !k.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            bail!("config line {}: bad key {k:?}", i + 1);
        }
        if k == "config" {
            bail!("config line {}: config files cannot include other config files", i + 1);
        }
        out.push((k.replace('_', "-"), v.trim().to_string()));
    }
    Ok(out)
}

fn to_flags(pairs: &[(String, String)]) -> Vec<OsString> {
    let mut flags = Vec::new();
    for (k, v) in pairs {
        match v.as_str() {
            "true" => flags.push(format!("--{k}").into()),
            "false" => {}
            _ => {
                flags.push(format!("--{k}").into());
                flags.push(v.into());
            }
        }
    }
    flags
}

/// Removes `--config FILE` (or `--config=FILE`) from `argv` and splices the
/// file's flags in right after the subcommand name.
pub fn expand_config(argv: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut rest = Vec::with_capacity(argv.len());
    let mut file = None;
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            let v = it.next().context("--config needs a file path")?;
            file = Some(v);
        } else if let Some(v) = s.strip_prefix("--config=") {
            file = Some(v.into());
        } else {
            rest.push(a);
        }
    }
    let Some(file) = file else { return Ok(rest) };
    let path = Path::new(&file);
    let text = fs::read_to_string(path).with_context(|| format!("cannot read config file {}", path.display()))?;
    let flags = to_flags(&parse_config(&text)?);
    // argv[0] is the program, argv[1] the subcommand.
    if rest.len() < 2 {
        bail!("--config needs a subcommand");
    }
    let tail = rest.split_off(2);
    rest.extend(flags);
    rest.extend(tail);
    Ok(rest)
}
