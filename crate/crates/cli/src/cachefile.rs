//! The Bernoulli cache file: JSON Lines, one record per line, big
//! integers as decimal strings so consumers never overflow.
//!
//! Line 1 is the header {"format":"bernoulli-cache","version":1}; each
//! following line is {"n":<even>,"num":"<dec>","den":"<dec>"} with n
//! ascending 0, 2, 4, ... Path resolution: --cache flag, then the
//! STIRLING_PADIC_CACHE environment variable, then ./bernoulli.cache.jsonl.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num::{BigInt, BigRational};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use stirling_padic::bernoulli::BernoulliCache;

use crate::CliError;

pub const DEFAULT_CACHE_FILE: &str = "bernoulli.cache.jsonl";
pub const CACHE_ENV_VAR: &str = "STIRLING_PADIC_CACHE";

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    n: u64,
    num: String,
    den: String,
}

pub fn resolve_path(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(CACHE_ENV_VAR).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_FILE))
}

fn bad_line(path: &Path, line: usize, reason: impl Into<String>) -> CliError {
    CliError::CacheFile {
        path: path.to_path_buf(),
        line,
        reason: reason.into(),
    }
}

/// Load and fully validate a cache file. `Ok(None)` when the file does
/// not exist. Every entry re-passes the von Staudt-Clausen check inside
/// `BernoulliCache::from_even_entries`; the first bad record is reported
/// with its line number.
pub fn load(path: &Path) -> Result<Option<BernoulliCache>, CliError> {
    let text = match fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(CliError::Io(e)),
    };
    let mut lines = text.lines().enumerate();
    let Some((_, header_line)) = lines.next() else {
        return Err(bad_line(path, 1, "empty cache file"));
    };
    let header: Header = serde_json::from_str(header_line)
        .map_err(|e| bad_line(path, 1, format!("bad header: {e}")))?;
    if header.format != "bernoulli-cache" || header.version != 1 {
        return Err(bad_line(
            path,
            1,
            format!(
                "unsupported cache format {:?} version {}",
                header.format, header.version
            ),
        ));
    }
    let mut entries = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let entry: Entry = serde_json::from_str(line)
            .map_err(|e| bad_line(path, lineno, format!("bad record: {e}")))?;
        let num = BigInt::from_str(&entry.num)
            .map_err(|e| bad_line(path, lineno, format!("bad numerator: {e}")))?;
        let den = BigInt::from_str(&entry.den)
            .map_err(|e| bad_line(path, lineno, format!("bad denominator: {e}")))?;
        if den <= BigInt::from(0) {
            return Err(bad_line(path, lineno, "denominator must be positive"));
        }
        entries.push((entry.n, BigRational::new(num, den)));
    }
    let cache = BernoulliCache::from_even_entries(&entries).map_err(|e| match e {
        stirling_padic::Error::Cache { entry, reason } => bad_line(path, entry + 2, reason),
        other => CliError::Core(other),
    })?;
    Ok(Some(cache))
}

/// Serialize the even-index entries of a cache, deterministic bytes.
pub fn render(cache: &BernoulliCache) -> String {
    let mut out = String::from("{\"format\":\"bernoulli-cache\",\"version\":1}\n");
    for (n, value) in cache.even_entries() {
        let entry = Entry {
            n,
            num: value.numer().to_string(),
            den: value.denom().to_string(),
        };
        out.push_str(&serde_json::to_string(&entry).expect("entry serialization"));
        out.push('\n');
    }
    out
}

pub fn store(path: &Path, cache: &BernoulliCache) -> Result<(), CliError> {
    fs::write(path, render(cache)).map_err(CliError::Io)
}

pub struct CacheInfo {
    pub records: usize,
    pub max_index: u64,
    pub sha256: String,
}

pub fn inspect(path: &Path) -> Result<Option<CacheInfo>, CliError> {
    let Some(cache) = load(path)? else {
        return Ok(None);
    };
    let bytes = fs::read(path).map_err(CliError::Io)?;
    let digest = Sha256::digest(&bytes);
    let sha256 = digest.iter().map(|b| format!("{b:02x}")).collect();
    let entries = cache.even_entries();
    Ok(Some(CacheInfo {
        records: entries.len(),
        max_index: entries.last().map(|(n, _)| *n).unwrap_or(0),
        sha256,
    }))
}
