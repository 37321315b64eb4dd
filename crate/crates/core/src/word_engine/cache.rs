//! On-disk cache of coset enumeration results.
//!
//! Entries are keyed by the SHA-256 of the presentation, the subgroup and
//! the budget. Each file is `MAGIC`, a little-endian `u32` format version, a
//! little-endian `u64` payload length, then the JSON payload.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::{Budget, CosetTable};
use crate::error::{Error, Result};
use crate::presentation::GroupPresentation;
use crate::word::Word;

const MAGIC: &[u8; 8] = b"TAUTCOSE";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub struct CertCache {
    dir: PathBuf,
}

impl CertCache {
    pub fn new(dir: impl AsRef<Path>) -> Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(CertCache { dir: dir.as_ref().to_path_buf() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(p: &GroupPresentation, subgroup: &[Word], budget: &Budget) -> String {
        let material = serde_json::json!({
            "version": FORMAT_VERSION,
            "presentation": p,
            "subgroup": subgroup,
            "budget": budget,
        });
        let digest = Sha256::digest(material.to_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.tc"))
    }

    /// `Some(None)` records an enumeration that exceeded its budget.
    pub fn load(&self, p: &GroupPresentation, subgroup: &[Word], budget: &Budget) -> Option<Option<CosetTable>> {
        let bytes = fs::read(self.path(&Self::key(p, subgroup, budget))).ok()?;
        decode(&bytes).ok()
    }

    pub fn store(
        &self,
        p: &GroupPresentation,
        subgroup: &[Word],
        budget: &Budget,
        result: &Option<CosetTable>,
    ) -> Result<()> {
        let path = self.path(&Self::key(p, subgroup, budget));
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, encode(result))?;
        fs::rename(tmp, path)?;
        Ok(())
    }
}

pub fn encode(result: &Option<CosetTable>) -> Vec<u8> {
    let payload = serde_json::to_vec(result).expect("tables serialize");
    let mut out = Vec::with_capacity(20 + payload.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
    out.extend_from_slice(&payload);
    out
}

pub fn decode(bytes: &[u8]) -> Result<Option<CosetTable>> {
    let bad = |m: &str| Error::Invalid(format!("cache entry: {m}"));
    if bytes.len() < 20 || &bytes[..8] != MAGIC {
        return Err(bad("bad header"));
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(bad("unsupported version"));
    }
    let len = u64::from_le_bytes(bytes[12..20].try_into().unwrap()) as usize;
    if bytes.len() != 20 + len {
        return Err(bad("truncated payload"));
    }
    Ok(serde_json::from_slice(&bytes[20..])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word_engine::todd_coxeter;

    #[test]
    fn round_trip_and_key_sensitivity() {
        let dir = std::env::temp_dir().join(format!("taut-cache-test-{}", std::process::id()));
        let cache = CertCache::new(&dir).unwrap();
        let p = GroupPresentation::new(vec!["a".into()], vec![Word::power(0, 5)]).unwrap();
        let budget = Budget::default();
        assert_eq!(cache.load(&p, &[], &budget), None);
        let table = todd_coxeter(&p, &[], &budget).ok();
        cache.store(&p, &[], &budget, &table).unwrap();
        assert_eq!(cache.load(&p, &[], &budget), Some(table));
        let other = Budget { max_cosets: 7, ..budget };
        assert_ne!(CertCache::key(&p, &[], &budget), CertCache::key(&p, &[], &other));
        assert_eq!(cache.load(&p, &[], &other), None);
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn corrupt_entries_are_rejected() {
        let mut bytes = encode(&None);
        assert_eq!(decode(&bytes).unwrap(), None);
        bytes[9] ^= 1;
        assert!(decode(&bytes).is_err());
        assert!(decode(b"short").is_err());
    }
}
