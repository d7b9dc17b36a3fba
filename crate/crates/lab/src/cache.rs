//! Per-step result cache: one JSON file per step, named by the SHA-256 of
//! everything the step depends on.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{LabError, LabResult};

/// Bumped whenever the layout of cached results changes.
pub const CACHE_FORMAT: u32 = 1;

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> LabResult<Self> {
        fs::create_dir_all(dir).map_err(|e| LabError::io(dir.to_path_buf(), e))?;
        Ok(Self { dir: dir.to_path_buf() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(parts: &impl Serialize) -> String {
        let bytes = serde_json::to_vec(parts).expect("serializable key");
        format!("{:x}", Sha256::digest(&bytes))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// `None` when absent or unreadable; a damaged entry is recomputed.
    pub fn load<T: DeserializeOwned>(&self, key: &str) -> Option<T> {
        let text = fs::read(self.path(key)).ok()?;
        serde_json::from_slice(&text).ok()
    }

    /// Writes through a temporary file so an interrupted run never leaves a
    /// partial entry.
    pub fn store<T: Serialize>(&self, key: &str, value: &T) -> LabResult<()> {
        let path = self.path(key);
        let tmp = self.dir.join(format!("{key}.tmp"));
        let bytes = serde_json::to_vec(value).expect("serializable value");
        fs::write(&tmp, bytes).map_err(|e| LabError::io(tmp.clone(), e))?;
        fs::rename(&tmp, &path).map_err(|e| LabError::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_stable_keys() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let k = Cache::key(&("figure_eight", 5u64));
        assert_eq!(k, Cache::key(&("figure_eight", 5u64)));
        assert_ne!(k, Cache::key(&("figure_eight", 6u64)));
        assert_eq!(k.len(), 64);
        assert_eq!(cache.load::<f64>(&k), None);
        cache.store(&k, &0.1f64).unwrap();
        assert_eq!(cache.load::<f64>(&k), Some(0.1));
        fs::write(dir.path().join(format!("{k}.json")), "{oops").unwrap();
        assert_eq!(cache.load::<f64>(&k), None);
    }
}
