//! On-disk census cache keyed by order, filter, enumerator, and a hash of the
//! enumeration code. Entries are re-verified before reuse.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::enumerate::{Census, CensusEntry, EFilter, Enumerator};
use crate::error::Result;
use crate::iso::Fingerprint;

/// Environment variable that overrides the cache directory.
pub const CACHE_ENV: &str = "SEMIBRACE_CACHE";

/// Hash of the crate version and the sources that determine a census.
pub fn code_version() -> String {
    let mut h = Sha256::new();
    h.update(env!("CARGO_PKG_VERSION"));
    for src in [include_str!("enumerate.rs"), include_str!("iso.rs"), include_str!("brace.rs"), include_str!("catalog.rs")] {
        h.update(src);
    }
    hex::encode(&h.finalize()[..8])
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    n: usize,
    filter: EFilter,
    enumerator: Enumerator,
    code_version: String,
    census: Vec<CensusEntry>,
}

#[derive(Debug)]
pub enum Lookup {
    Hit(Census),
    Miss,
    /// A file exists but failed re-verification; the reason is attached.
    Stale(String),
}

#[derive(Clone, Debug)]
pub struct CensusCache {
    dir: PathBuf,
}

impl CensusCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        CensusCache { dir: dir.into() }
    }

    /// `SEMIBRACE_CACHE` if set, else `fallback`.
    pub fn from_env_or(fallback: Option<PathBuf>) -> Option<Self> {
        std::env::var_os(CACHE_ENV).map(PathBuf::from).or(fallback).map(CensusCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, n: usize, filter: EFilter, enumerator: Enumerator) -> PathBuf {
        self.dir.join(format!("census-n{n}-{filter}-{enumerator}-{}.json", code_version()))
    }

    pub fn load(&self, n: usize, filter: EFilter, enumerator: Enumerator) -> Result<Lookup> {
        let path = self.path(n, filter, enumerator);
        if !path.exists() {
            return Ok(Lookup::Miss);
        }
        let text = fs::read_to_string(&path)?;
        let file: CacheFile = match serde_json::from_str(&text) {
            Ok(f) => f,
            Err(e) => return Ok(Lookup::Stale(format!("unreadable cache file: {e}"))),
        };
        if (file.n, file.filter, file.enumerator) != (n, filter, enumerator) || file.code_version != code_version() {
            return Ok(Lookup::Stale("cache key mismatch".into()));
        }
        for (i, entry) in file.census.iter().enumerate() {
            if entry.semibrace.n() != n || Fingerprint::of(&entry.semibrace) != entry.fingerprint {
                return Ok(Lookup::Stale(format!("entry {i} fails fingerprint re-check")));
            }
        }
        Ok(Lookup::Hit(Census { n, filter, enumerator, entries: file.census }))
    }

    pub fn store(&self, census: &Census) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path(census.n, census.filter, census.enumerator);
        let file = CacheFile {
            n: census.n,
            filter: census.filter,
            enumerator: census.enumerator,
            code_version: code_version(),
            census: census.entries.clone(),
        };
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_string(&file)?)?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    /// The cached census if it re-verifies, else `compute()` stored afresh.
    /// The flag reports a cache hit.
    pub fn get_or_compute(
        &self,
        n: usize,
        filter: EFilter,
        enumerator: Enumerator,
        compute: impl FnOnce() -> Result<Census>,
    ) -> Result<(Census, bool)> {
        if let Lookup::Hit(c) = self.load(n, filter, enumerator)? {
            return Ok((c, true));
        }
        let c = compute()?;
        self.store(&c)?;
        Ok((c, false))
    }
}
