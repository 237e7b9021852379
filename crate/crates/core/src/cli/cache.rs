//! Append-only result cache: one JSON document per line.
//!
//! Entries are keyed by command, `n`, parameters and the crate version; a
//! hit requires an exact key match. Lines that fail to parse are skipped
//! with a warning. Appends rewrite the file through a temporary sibling and
//! a rename, so readers never observe a torn line.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

pub const CACHE_ENV: &str = "INTERLOCK_CACHE";
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub command: String,
    pub n: usize,
    pub params: serde_json::Value,
    pub version: String,
}

impl CacheKey {
    pub fn new(command: impl Into<String>, n: usize, params: serde_json::Value) -> Self {
        CacheKey {
            command: command.into(),
            n,
            params,
            version: CODE_VERSION.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: CacheKey,
    pub value: serde_json::Value,
    /// Seconds since the Unix epoch.
    pub created_at: u64,
}

#[derive(Debug, Clone)]
pub struct Cache {
    path: PathBuf,
}

impl Cache {
    pub fn open(path: impl Into<PathBuf>) -> Self {
        Cache { path: path.into() }
    }

    /// `$INTERLOCK_CACHE`, else the per-user data directory.
    pub fn from_env() -> Option<Self> {
        if let Some(p) = std::env::var_os(CACHE_ENV) {
            return Some(Cache::open(p));
        }
        let data = std::env::var_os("XDG_DATA_HOME")
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("HOME").map(|h| Path::new(&h).join(".local/share")))?;
        Some(Cache::open(data.join("interlock").join("cache.jsonl")))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn entries(&self) -> Vec<CacheEntry> {
        let Ok(text) = fs::read_to_string(&self.path) else {
            return Vec::new();
        };
        text.lines()
            .enumerate()
            .filter(|(_, line)| !line.trim().is_empty())
            .filter_map(|(i, line)| match serde_json::from_str(line) {
                Ok(entry) => Some(entry),
                Err(e) => {
                    log::warn!("{}:{}: skipping corrupt cache entry ({e})", self.path.display(), i + 1);
                    None
                }
            })
            .collect()
    }

    pub fn lookup(&self, key: &CacheKey) -> Option<serde_json::Value> {
        self.entries().into_iter().find(|e| &e.key == key).map(|e| e.value)
    }

    pub fn append(&self, key: CacheKey, value: serde_json::Value) -> io::Result<()> {
        let created_at = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let entry = CacheEntry { key, value, created_at };
        let mut text = match fs::read_to_string(&self.path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => String::new(),
            Err(e) => return Err(e),
        };
        if !text.is_empty() && !text.ends_with('\n') {
            text.push('\n');
        }
        text.push_str(&serde_json::to_string(&entry)?);
        text.push('\n');
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let mut tmp = self.path.clone().into_os_string();
        tmp.push(format!(".tmp.{}", std::process::id()));
        fs::write(&tmp, text)?;
        fs::rename(&tmp, &self.path)
    }
}
