//! `key = value` config files, merged under the command-line flags.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::Path;

use clap::{ArgMatches, Command};

use crate::error::{Error, Result};

/// Settings that change how a run executes but not what it computes; they
/// are left out of the embedded config so reports stay byte-identical.
const EXECUTION_ONLY: &[&str] = &["threads", "config", "output"];

/// Reads `key = value` lines; `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read config {}: {e}", path.display())))?;
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::InvalidInput(format!(
                "{}:{}: expected key = value",
                path.display(),
                i + 1
            ))
        })?;
        entries.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(entries)
}

/// The value of `--config`, if given, read straight from the raw arguments.
pub fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Some(v.into());
        }
    }
    None
}

/// Index just past the subcommand path in `args`, where file-derived flags
/// can be inserted so that later command-line flags override them.
fn subcommand_end(root: &Command, args: &[OsString]) -> usize {
    let mut cmd = root;
    let mut end = 1;
    let mut i = 1;
    while i < args.len() {
        let s = args[i].to_string_lossy();
        if let Some(name) = s.strip_prefix("--") {
            let takes_value = !name.contains('=')
                && cmd
                    .get_arguments()
                    .find(|a| a.get_long() == Some(name))
                    .is_some_and(|a| a.get_action().takes_values());
            i += if takes_value { 2 } else { 1 };
            continue;
        }
        match cmd.find_subcommand(s.as_ref()) {
            Some(sub) => {
                cmd = sub;
                i += 1;
                end = i;
            }
            None => break,
        }
    }
    end
}

/// Splices the config entries into `args` as flags ahead of the user's own.
pub fn merge_args(
    root: &Command,
    args: Vec<OsString>,
    entries: &[(String, String)],
) -> Vec<OsString> {
    let at = subcommand_end(root, &args);
    let mut extra = Vec::new();
    for (k, v) in entries {
        match v.as_str() {
            "true" => extra.push(format!("--{k}").into()),
            "false" => {}
            _ => {
                extra.push(format!("--{k}").into());
                extra.push(v.into());
            }
        }
    }
    let mut merged = args[..at].to_vec();
    merged.extend(extra);
    merged.extend_from_slice(&args[at..]);
    merged
}

/// Every argument value seen along the subcommand path, defaults included.
pub fn resolved(matches: &ArgMatches) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    let mut m = Some(("", matches));
    let mut path = Vec::new();
    while let Some((name, sub)) = m {
        if !name.is_empty() {
            path.push(name.to_string());
        }
        for id in sub.ids() {
            let id = id.as_str();
            // derive-generated group ids are capitalized
            if EXECUTION_ONLY.contains(&id) || id.starts_with(|c: char| c.is_ascii_uppercase()) {
                continue;
            }
            if let Ok(Some(raw)) = sub.try_get_raw(id) {
                let vals: Vec<String> = raw.map(|v| v.to_string_lossy().into_owned()).collect();
                out.insert(id.to_string(), vals.join(" "));
            }
        }
        m = sub.subcommand();
    }
    out.insert("command".into(), path.join(" "));
    out
}
