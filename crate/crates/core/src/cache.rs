//! On-disk JSON result store keyed by SHA-256 digests.
//!
//! Entries are written to a temporary file and renamed into place, so
//! concurrent writers never expose a partial file; the last writer wins,
//! which is fine because cached values are deterministic.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;

pub const CACHE_DIR_ENV: &str = "ADEG_CACHE_DIR";

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GcReport {
    pub kept: usize,
    pub removed: usize,
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    /// Cache rooted at `$ADEG_CACHE_DIR`, if the variable is set.
    pub fn from_env() -> Result<Option<Self>> {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(dir) if !dir.is_empty() => Ok(Some(Self::open(PathBuf::from(dir))?)),
            _ => Ok(None),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(parts: &[&str]) -> String {
        let mut h = Sha256::new();
        for p in parts {
            h.update(p.as_bytes());
            h.update([0u8]);
        }
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get<T: DeserializeOwned>(&self, key: &str) -> Option<T> {
        let bytes = fs::read(self.path(key)).ok()?;
        serde_json::from_slice(&bytes).ok()
    }

    pub fn put<T: Serialize>(&self, key: &str, value: &T) -> Result<()> {
        let tmp = self.dir.join(format!(
            ".{key}.{}.{:?}.tmp",
            std::process::id(),
            std::thread::current().id()
        ));
        fs::write(&tmp, serde_json::to_vec(value)?)?;
        fs::rename(&tmp, self.path(key))?;
        Ok(())
    }

    /// Removes stray temporary files and entries that no longer parse as JSON.
    pub fn gc(&self) -> Result<GcReport> {
        let mut report = GcReport::default();
        for entry in fs::read_dir(&self.dir)? {
            let path = entry?.path();
            if !path.is_file() {
                continue;
            }
            let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
            let keep = name.ends_with(".json")
                && !name.starts_with('.')
                && fs::read(&path)
                    .ok()
                    .and_then(|b| serde_json::from_slice::<serde_json::Value>(&b).ok())
                    .is_some();
            if keep {
                report.kept += 1;
            } else {
                fs::remove_file(&path)?;
                report.removed += 1;
            }
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn put_get_gc() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let key = Cache::key(&["approx", "tt:2:8", "1/3"]);
        assert_eq!(key.len(), 64);
        cache.put(&key, &vec![1, 2, 3]).unwrap();
        assert_eq!(cache.get::<Vec<i32>>(&key), Some(vec![1, 2, 3]));
        assert_eq!(cache.get::<Vec<i32>>("missing"), None);

        fs::write(dir.path().join("broken.json"), b"{not json").unwrap();
        fs::write(dir.path().join(".x.tmp"), b"").unwrap();
        let report = cache.gc().unwrap();
        assert_eq!(
            report,
            GcReport {
                kept: 1,
                removed: 2
            }
        );
    }
}
