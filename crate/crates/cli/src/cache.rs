//! On-disk certificate cache: one JSON document per `(HNF basis, l)`, stored
//! under a two-character hash-prefix directory. Entries are re-verified on
//! load; anything unreadable or inconsistent is ignored with a warning.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rankin::denssub::{self, SearchCertificate, SearchOptions};
use rankin::lattices::IntegralLattice;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const TOOL_VERSION: &str = concat!("rankin ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub certificate: SearchCertificate,
    pub tool_version: String,
}

/// Hex SHA-256 of the canonical text of the HNF basis and `l`.
pub fn cache_key(lattice: &IntegralLattice, l: usize) -> String {
    let mut text = format!("rankin-dl-v1\nl={l}\n");
    for row in lattice.basis() {
        let cells: Vec<String> = row.iter().map(i64::to_string).collect();
        text += &cells.join(",");
        text.push('\n');
    }
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Clone, Debug)]
pub struct Cache {
    root: PathBuf,
}

/// Where a lookup came from, reported on stderr only.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Hit,
    Computed,
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    /// `$XDG_CACHE_HOME/rankin`, else `$HOME/.cache/rankin`.
    pub fn default_dir() -> Option<PathBuf> {
        let non_empty = |v: &str| std::env::var_os(v).filter(|s| !s.is_empty());
        non_empty("XDG_CACHE_HOME")
            .map(PathBuf::from)
            .or_else(|| non_empty("HOME").map(|h| Path::new(&h).join(".cache")))
            .map(|d| d.join("rankin"))
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.root.join(&key[..2]).join(format!("{key}.json"))
    }

    pub fn load(&self, lattice: &IntegralLattice, l: usize) -> Option<SearchCertificate> {
        let key = cache_key(lattice, l);
        let path = self.path_for(&key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return None,
            Err(e) => {
                warn(&path, &e.to_string());
                return None;
            }
        };
        let entry: CacheEntry = match serde_json::from_str(&text) {
            Ok(e) => e,
            Err(e) => {
                warn(&path, &format!("unparseable entry: {e}"));
                return None;
            }
        };
        if entry.key != key || entry.certificate.l != l {
            warn(&path, "entry does not match its key");
            return None;
        }
        if let Err(e) = denssub::verify_certificate(lattice, &entry.certificate) {
            warn(&path, &e.to_string());
            return None;
        }
        Some(entry.certificate)
    }

    /// Writes to a temporary file in the target directory, then renames.
    pub fn store(&self, lattice: &IntegralLattice, cert: &SearchCertificate) -> std::io::Result<()> {
        let key = cache_key(lattice, cert.l);
        let path = self.path_for(&key);
        let dir = path.parent().expect("entry paths have a parent");
        fs::create_dir_all(dir)?;
        let entry = CacheEntry { key: key.clone(), certificate: cert.clone(), tool_version: TOOL_VERSION.into() };
        let mut text = serde_json::to_string_pretty(&entry).expect("serializable");
        text.push('\n');
        let tmp = dir.join(format!(".{key}.{}.tmp", std::process::id()));
        let result = (|| {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(text.as_bytes())?;
            f.sync_all()?;
            fs::rename(&tmp, &path)
        })();
        if result.is_err() {
            let _ = fs::remove_file(&tmp);
        }
        result
    }
}

fn warn(path: &Path, msg: &str) {
    eprintln!("warning: ignoring cache entry {}: {msg}", path.display());
}

/// `d_l` through the cache when one is configured. Store failures only warn.
pub fn cached_search(
    cache: Option<&Cache>,
    lattice: &IntegralLattice,
    l: usize,
    opts: &SearchOptions,
) -> rankin::Result<(SearchCertificate, Origin)> {
    if let Some(cert) = cache.and_then(|c| c.load(lattice, l)) {
        return Ok((cert, Origin::Hit));
    }
    let cert = denssub::d_l_search(lattice, l, opts)?;
    if let Some(c) = cache {
        if let Err(e) = c.store(lattice, &cert) {
            eprintln!("warning: could not write cache entry under {}: {e}", c.root().display());
        }
    }
    Ok((cert, Origin::Computed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rankin::codes;
    use rankin::lattices::construction_a;

    fn d4() -> IntegralLattice {
        construction_a(&codes::parity_check_code(4, 2).unwrap())
    }

    #[test]
    fn key_depends_on_lattice_and_rank_only() {
        let a = d4();
        let b = IntegralLattice::from_rows(&[
            vec![1, 1, 0, 0],
            vec![0, 1, 1, 0],
            vec![0, 0, 1, 1],
            vec![2, 0, 0, 0],
        ])
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(cache_key(&a, 2), cache_key(&b, 2));
        assert_ne!(cache_key(&a, 1), cache_key(&a, 2));
        assert_eq!(cache_key(&a, 2).len(), 64);
    }

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let lattice = d4();
        let opts = SearchOptions::default();
        let (cold, origin) = cached_search(Some(&cache), &lattice, 2, &opts).unwrap();
        assert_eq!(origin, Origin::Computed);
        let (warm, origin) = cached_search(Some(&cache), &lattice, 2, &opts).unwrap();
        assert_eq!(origin, Origin::Hit);
        assert_eq!(cold, warm);

        let path = cache.path_for(&cache_key(&lattice, 2));
        fs::write(&path, "{ not json").unwrap();
        assert!(cache.load(&lattice, 2).is_none());

        // A well-formed entry with a forged value is rejected.
        let mut forged = cold.clone();
        forged.value = 2;
        let entry = CacheEntry { key: cache_key(&lattice, 2), certificate: forged, tool_version: TOOL_VERSION.into() };
        fs::write(&path, serde_json::to_string(&entry).unwrap()).unwrap();
        assert!(cache.load(&lattice, 2).is_none());
        let (again, origin) = cached_search(Some(&cache), &lattice, 2, &opts).unwrap();
        assert_eq!((again, origin), (cold, Origin::Computed));
    }
}
