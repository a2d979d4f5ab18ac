//! Checksummed on-disk store for computed artifacts.
//!
//! One artifact per file, two lines:
//!
//! ```text
//! {"artifact":"<name>","version":<u32>,"sha256":"<hex of body>"}
//! <body: one JSON document>
//! ```
//!
//! Reads validate the header's artifact name, format version, and the SHA-256
//! of the body; any mismatch, truncation, or parse failure makes the entry
//! read as absent, never as an error — a cache must degrade to recomputation.
//! Writes go through a temporary file in the same directory followed by a
//! rename, so a crashed writer leaves either the old entry or none.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use thiserror::Error;

use crate::field::parse_modulus;

/// Bumped whenever the header or body layout of any artifact changes;
/// entries written under another version read as absent.
pub const STORE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("store i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("store serialization failure: {0}")]
    Serde(#[from] serde_json::Error),
}

#[derive(Serialize, Deserialize)]
struct Header {
    artifact: String,
    version: u32,
    sha256: String,
}

fn sha256_hex(body: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(body.as_bytes());
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

/// Restrict keys to a filename-safe alphabet so callers can embed parameter
/// strings (moduli use commas, which map to dashes).
fn sanitize(key: &str) -> String {
    key.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '-' { c } else { '-' })
        .collect()
}

#[derive(Debug, Clone)]
pub struct Store {
    dir: PathBuf,
}

impl Store {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Store { dir: dir.into() }
    }

    pub fn dir(&self) -> &std::path::Path {
        &self.dir
    }

    fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.json", sanitize(key)))
    }

    /// Validated body of `key`, or None when absent or damaged in any way.
    pub fn read(&self, key: &str, artifact: &str) -> Option<String> {
        let text = fs::read_to_string(self.path_for(key)).ok()?;
        let (header_line, body) = text.split_once('\n')?;
        let header: Header = serde_json::from_str(header_line).ok()?;
        let body = body.strip_suffix('\n').unwrap_or(body);
        if header.artifact != artifact
            || header.version != STORE_FORMAT_VERSION
            || header.sha256 != sha256_hex(body)
        {
            return None;
        }
        Some(body.to_string())
    }

    /// Atomically persist `body` under `key`.
    pub fn write(&self, key: &str, artifact: &str, body: &str) -> Result<(), StoreError> {
        fs::create_dir_all(&self.dir)?;
        let header = serde_json::to_string(&Header {
            artifact: artifact.to_string(),
            version: STORE_FORMAT_VERSION,
            sha256: sha256_hex(body),
        })?;
        let target = self.path_for(key);
        let tmp = self.dir.join(format!(
            ".{}.tmp-{}-{:x}",
            sanitize(key),
            std::process::id(),
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.subsec_nanos())
                .unwrap_or(0)
        ));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(header.as_bytes())?;
            f.write_all(b"\n")?;
            f.write_all(body.as_bytes())?;
            f.write_all(b"\n")?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &target)?;
        Ok(())
    }

    /// Remove one entry; absent entries are fine.
    pub fn remove(&self, key: &str) -> Result<(), StoreError> {
        match fs::remove_file(self.path_for(key)) {
            Ok(()) => Ok(()),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(()),
            Err(e) => Err(e.into()),
        }
    }
}

const MODULUS_ARTIFACT: &str = "field-modulus";

#[derive(Serialize, Deserialize)]
struct ModulusRecord {
    p: u64,
    n: u32,
    modulus: String,
}

fn modulus_key(p: u64, n: u32) -> String {
    format!("field_p{p}_n{n}")
}

/// Previously discovered irreducible modulus for F_{p^n}, if cached and sane.
pub fn cached_modulus(store: &Store, p: u64, n: u32) -> Option<Vec<u64>> {
    let body = store.read(&modulus_key(p, n), MODULUS_ARTIFACT)?;
    let record: ModulusRecord = serde_json::from_str(&body).ok()?;
    if record.p != p || record.n != n {
        return None;
    }
    let coeffs = parse_modulus(&record.modulus).ok()?;
    if coeffs.len() != n as usize + 1 || coeffs.iter().any(|&c| c >= p) {
        return None;
    }
    Some(coeffs)
}

/// Remember the modulus the field search settled on for (p, n).
pub fn save_modulus(store: &Store, p: u64, n: u32, modulus: &str) -> Result<(), StoreError> {
    let body = serde_json::to_string(&ModulusRecord { p, n, modulus: modulus.to_string() })?;
    store.write(&modulus_key(p, n), MODULUS_ARTIFACT, &body)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn temp_store(tag: &str) -> Store {
        let dir = std::env::temp_dir().join(format!(
            "wdist-store-test-{tag}-{}-{:x}",
            std::process::id(),
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .unwrap()
                .subsec_nanos()
        ));
        Store::new(dir)
    }

    #[test]
    fn roundtrip_and_overwrite() {
        let store = temp_store("roundtrip");
        assert_eq!(store.read("alpha", "thing"), None);
        store.write("alpha", "thing", r#"{"x":1}"#).unwrap();
        assert_eq!(store.read("alpha", "thing").as_deref(), Some(r#"{"x":1}"#));
        store.write("alpha", "thing", r#"{"x":2}"#).unwrap();
        assert_eq!(store.read("alpha", "thing").as_deref(), Some(r#"{"x":2}"#));
        fs::remove_dir_all(store.dir()).unwrap();
    }

    #[test]
    fn wrong_artifact_name_reads_as_absent() {
        let store = temp_store("artifact");
        store.write("alpha", "thing", "body").unwrap();
        assert_eq!(store.read("alpha", "other"), None);
        fs::remove_dir_all(store.dir()).unwrap();
    }

    #[test]
    fn corruption_reads_as_absent_not_as_error() {
        let store = temp_store("corrupt");
        store.write("alpha", "thing", r#"{"x":1}"#).unwrap();
        let path = store.dir().join("alpha.json");

        let good = fs::read_to_string(&path).unwrap();
        // body tampered
        fs::write(&path, good.replace(r#"{"x":1}"#, r#"{"x":9}"#)).unwrap();
        assert_eq!(store.read("alpha", "thing"), None);
        // header tampered
        fs::write(&path, good.replacen("thing", "think", 1)).unwrap();
        assert_eq!(store.read("alpha", "thing"), None);
        // truncated to one line
        fs::write(&path, good.lines().next().unwrap()).unwrap();
        assert_eq!(store.read("alpha", "thing"), None);
        // not JSON at all
        fs::write(&path, "garbage").unwrap();
        assert_eq!(store.read("alpha", "thing"), None);
        // empty
        fs::write(&path, "").unwrap();
        assert_eq!(store.read("alpha", "thing"), None);

        // restored verbatim, valid again
        fs::write(&path, &good).unwrap();
        assert_eq!(store.read("alpha", "thing").as_deref(), Some(r#"{"x":1}"#));
        fs::remove_dir_all(store.dir()).unwrap();
    }

    #[test]
    fn modulus_cache_roundtrip_and_validation() {
        let store = temp_store("modulus");
        assert_eq!(cached_modulus(&store, 3, 3), None);
        save_modulus(&store, 3, 3, "1,0,2,1").unwrap();
        assert_eq!(cached_modulus(&store, 3, 3), Some(vec![1, 0, 2, 1]));
        // record whose embedded parameters disagree with its key is rejected
        store
            .write("field_p5_n3", "field-modulus", r#"{"p":3,"n":3,"modulus":"1,0,2,1"}"#)
            .unwrap();
        assert_eq!(cached_modulus(&store, 5, 3), None);
        // record with an out-of-range coefficient is rejected
        store
            .write("field_p3_n2", "field-modulus", r#"{"p":3,"n":2,"modulus":"5,1,1"}"#)
            .unwrap();
        assert_eq!(cached_modulus(&store, 3, 2), None);
        fs::remove_dir_all(store.dir()).unwrap();
    }

    #[test]
    fn keys_with_hostile_characters_become_plain_filenames() {
        let store = temp_store("sanitize");
        store.write("../..//etc passwd", "thing", "body").unwrap();
        assert_eq!(store.read("../..//etc passwd", "thing").as_deref(), Some("body"));
        let names: Vec<String> = fs::read_dir(store.dir())
            .unwrap()
            .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
            .collect();
        assert_eq!(names, vec!["..-..--etc-passwd.json".to_string()]);
        fs::remove_dir_all(store.dir()).unwrap();
    }
}
