//! On-disk JSON cache for intermediate and final pipeline results.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CACHE_FORMAT: u32 = 1;
pub const CACHE_ENV: &str = "MDEG_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Entry<T> {
    format: u32,
    key: String,
    value: T,
}

/// A directory of `<key>.json` files. A cache without a directory stores nothing.
#[derive(Clone, Debug, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CacheStat {
    pub entries: usize,
    pub bytes: u64,
}

impl Cache {
    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: Some(dir.into()) }
    }

    /// `MDEG_CACHE_DIR` if set, else `fallback`.
    pub fn from_env_or(fallback: Option<PathBuf>) -> Self {
        match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => Cache::at(PathBuf::from(d)),
            _ => Cache { dir: fallback },
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        let safe: String = key.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect();
        self.dir.as_ref().map(|d| d.join(format!("{safe}.json")))
    }

    /// The stored value, `None` if absent. A file that does not parse is `CacheCorrupt`.
    pub fn get<T: DeserializeOwned>(&self, key: &str) -> Result<Option<T>> {
        let Some(path) = self.path(key) else { return Ok(None) };
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let entry: Entry<T> = serde_json::from_str(&text)
            .map_err(|e| Error::CacheCorrupt(format!("{}: {e}", path.display())))?;
        if entry.format != CACHE_FORMAT || entry.key != key {
            return Ok(None);
        }
        Ok(Some(entry.value))
    }

    pub fn put<T: Serialize>(&self, key: &str, value: &T) -> Result<()> {
        let Some(path) = self.path(key) else { return Ok(()) };
        fs::create_dir_all(path.parent().expect("cache file has a parent"))?;
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_vec(&Entry { format: CACHE_FORMAT, key: key.to_string(), value })?)?;
        fs::rename(tmp, path)?;
        Ok(())
    }

    /// Cached value of `compute`.
    pub fn get_or<T, F>(&self, key: &str, compute: F) -> Result<T>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        if let Some(v) = self.get(key)? {
            return Ok(v);
        }
        let v = compute()?;
        self.put(key, &v)?;
        Ok(v)
    }

    fn files(&self) -> Result<Vec<PathBuf>> {
        let Some(dir) = &self.dir else { return Ok(Vec::new()) };
        let rd = match fs::read_dir(dir) {
            Ok(rd) => rd,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e.into()),
        };
        let mut out = Vec::new();
        for e in rd {
            let p = e?.path();
            if p.extension().is_some_and(|x| x == "json" || x == "tmp") {
                out.push(p);
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn stat(&self) -> Result<CacheStat> {
        let mut s = CacheStat::default();
        for p in self.files()? {
            s.entries += 1;
            s.bytes += fs::metadata(&p)?.len();
        }
        Ok(s)
    }

    /// Removes leftover temporary files and entries that do not parse or
    /// have an outdated format. Returns the number of files removed.
    pub fn gc(&self) -> Result<usize> {
        let mut removed = 0;
        for p in self.files()? {
            let stale = p.extension().is_some_and(|x| x == "tmp")
                || match fs::read_to_string(&p) {
                    Ok(t) => serde_json::from_str::<Entry<serde_json::Value>>(&t).map_or(true, |e| e.format != CACHE_FORMAT),
                    Err(_) => true,
                };
            if stale {
                fs::remove_file(&p)?;
                removed += 1;
            }
        }
        Ok(removed)
    }
}
