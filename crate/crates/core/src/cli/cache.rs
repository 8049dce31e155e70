//! On-disk cache of per-degree results.
//!
//! One JSON file per `(n, d, kind)`, named by the SHA-256 of the key. Each
//! file records the key, the schema version and a digest of its payload;
//! anything that fails to match is treated as a miss and overwritten.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub n: usize,
    pub d: u32,
    pub kind: String,
    pub schema: u32,
}

impl CacheKey {
    pub fn new(n: usize, d: u32, kind: &str) -> Self {
        Self {
            n,
            d,
            kind: kind.to_string(),
            schema: SCHEMA_VERSION,
        }
    }

    pub fn file_name(&self) -> String {
        let text = format!("gocohom/{}/{}/{}/{}", self.schema, self.kind, self.n, self.d);
        format!("{}.json", hex::encode(Sha256::digest(text.as_bytes())))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: CacheKey,
    pub digest: String,
    pub payload: serde_json::Value,
}

fn digest_of(payload: &serde_json::Value) -> String {
    hex::encode(Sha256::digest(payload.to_string().as_bytes()))
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| Error::Cache(format!("{}: {e}", dir.display())))?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(key.file_name())
    }

    /// Returns the cached payload, or `None` if absent, stale or corrupt.
    pub fn load<T: DeserializeOwned>(&self, key: &CacheKey) -> Option<T> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        if entry.key != *key || entry.digest != digest_of(&entry.payload) {
            return None;
        }
        serde_json::from_value(entry.payload).ok()
    }

    /// Writes through a temporary file and an atomic rename.
    pub fn store<T: Serialize>(&self, key: &CacheKey, value: &T) -> Result<()> {
        let payload = serde_json::to_value(value)?;
        let entry = CacheEntry {
            key: key.clone(),
            digest: digest_of(&payload),
            payload,
        };
        let target = self.path(key);
        let tmp = self.dir.join(format!(
            ".{}.{}.{:?}.tmp",
            key.file_name(),
            std::process::id(),
            std::thread::current().id()
        ));
        fs::write(&tmp, serde_json::to_vec(&entry)?)?;
        fs::rename(&tmp, &target).map_err(|e| {
            let _ = fs::remove_file(&tmp);
            Error::Cache(format!("{}: {e}", target.display()))
        })
    }

    pub fn get_or_compute<T, F>(&self, key: &CacheKey, compute: F) -> Result<T>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        if let Some(hit) = self.load(key) {
            return Ok(hit);
        }
        let value = compute()?;
        self.store(key, &value)?;
        Ok(value)
    }
}
