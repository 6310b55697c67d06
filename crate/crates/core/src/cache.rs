//! Append-only JSON-lines cache of computed counts.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::Result;

pub const CACHE_ENV: &str = "RADCOUNT_CACHE";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub key: String,
    /// Decimal count.
    pub value: String,
    /// The quiver file the count was computed from, for re-verification.
    pub quiver: Value,
    pub mode: String,
    pub q: u32,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub elapsed: f64,
}

impl CacheRecord {
    pub fn new(key: String, value: String, quiver: Value, mode: String, q: u32, elapsed: f64) -> Self {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        Self {
            key,
            value,
            quiver,
            mode,
            q,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
            elapsed,
        }
    }
}

/// `{canonical hash}|{mode}|q={q}`.
pub fn cache_key(hash: &str, mode: &str, q: u32) -> String {
    format!("{hash}|{mode}|q={q}")
}

/// Deterministic 10% sample of keys whose hits are recomputed.
pub fn audit_selected(key: &str) -> bool {
    Sha256::digest(key.as_bytes())[0] % 10 == 0
}

#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
    records: Vec<CacheRecord>,
    index: HashMap<String, usize>,
    warnings: Vec<String>,
}

impl Cache {
    /// Loads the cache at `path`; a missing file is an empty cache and
    /// unparseable lines are skipped with a warning.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut cache = Self {
            path: path.clone(),
            records: Vec::new(),
            index: HashMap::new(),
            warnings: Vec::new(),
        };
        let file = match File::open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(e.into()),
        };
        for (n, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<CacheRecord>(&line) {
                Ok(rec) => {
                    cache.index.insert(rec.key.clone(), cache.records.len());
                    cache.records.push(rec);
                }
                Err(e) => cache
                    .warnings
                    .push(format!("{}:{}: skipping corrupt cache line ({e})", path.display(), n + 1)),
            }
        }
        Ok(cache)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Latest record for `key`.
    pub fn get(&self, key: &str) -> Option<&CacheRecord> {
        self.index.get(key).map(|&i| &self.records[i])
    }

    pub fn records(&self) -> &[CacheRecord] {
        &self.records
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Appends one line under an exclusive advisory lock.
    pub fn append(&mut self, record: CacheRecord) -> Result<()> {
        let mut line = serde_json::to_string(&record)?;
        line.push('\n');
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        file.lock()?;
        let written = file.write_all(line.as_bytes()).and_then(|_| file.flush());
        file.unlock()?;
        written?;
        self.index.insert(record.key.clone(), self.records.len());
        self.records.push(record);
        Ok(())
    }
}
