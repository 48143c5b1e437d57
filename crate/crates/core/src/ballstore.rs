//! Content-addressed on-disk cache of enumerated balls.
//!
//! Record layout, integers big-endian:
//!
//! ```text
//! offset  size  field
//! 0       8     magic "WDBALL\0\0"
//! 8       2     version (1)
//! 10      32    group spec hash
//! 42      8     radius numerator (i64)
//! 50      8     radius denominator (i64, > 0)
//! 58      8     element count
//! 66      32    SHA-256 of the body
//! 98      ..    body: count × (u32 length ‖ canonical encoding),
//!               then count × LEB128 word length
//! ```
//!
//! The content id is the hex SHA-256 of the header without its checksum
//! field followed by the body. Records live in `records/<id>.ball`; a
//! `manifest.json` lists them.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cayley::SpecHash;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

const MAGIC: &[u8; 8] = b"WDBALL\0\0";
const VERSION: u16 = 1;
const HEADER_LEN: usize = 98;
pub const CACHE_ENV: &str = "WREATHDIM_CACHE";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallRecord {
    pub spec_hash: SpecHash,
    pub radius: Rational,
    pub encodings: Vec<Vec<u8>>,
    pub lengths: Vec<u32>,
}

impl BallRecord {
    pub fn count(&self) -> usize {
        self.encodings.len()
    }

    pub fn check(&self) -> Result<()> {
        if self.encodings.len() != self.lengths.len() {
            return Err(Error::InvalidInput(
                "encodings and lengths differ in count".into(),
            ));
        }
        if self.encodings.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "encodings are not strictly sorted".into(),
            ));
        }
        if let Some(l) = self
            .lengths
            .iter()
            .find(|&&l| !rational::lt(l as u64, &self.radius))
        {
            return Err(Error::InvalidInput(format!(
                "length {l} is not below radius {}",
                self.radius
            )));
        }
        Ok(())
    }

    fn body(&self) -> Vec<u8> {
        let mut body = Vec::new();
        for e in &self.encodings {
            body.extend_from_slice(&(e.len() as u32).to_be_bytes());
            body.extend_from_slice(e);
        }
        for &l in &self.lengths {
            write_varint(&mut body, l);
        }
        body
    }

    fn header(&self) -> Vec<u8> {
        let mut h = Vec::with_capacity(HEADER_LEN - 32);
        h.extend_from_slice(MAGIC);
        h.extend_from_slice(&VERSION.to_be_bytes());
        h.extend_from_slice(&self.spec_hash.0);
        h.extend_from_slice(&self.radius.numer().to_be_bytes());
        h.extend_from_slice(&self.radius.denom().to_be_bytes());
        h.extend_from_slice(&(self.count() as u64).to_be_bytes());
        h
    }

    /// Serialized bytes and content id.
    pub fn to_bytes(&self) -> (Vec<u8>, String) {
        let header = self.header();
        let body = self.body();
        let mut id = Sha256::new();
        id.update(&header);
        id.update(&body);
        let mut out = header;
        out.extend_from_slice(&Sha256::digest(&body));
        out.extend_from_slice(&body);
        (out, hex::encode(id.finalize()))
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::Integrity(m.to_string());
        if bytes.len() < HEADER_LEN {
            return Err(bad("record shorter than its header"));
        }
        if &bytes[..8] != MAGIC {
            return Err(bad("bad magic"));
        }
        let version = u16::from_be_bytes(bytes[8..10].try_into().unwrap());
        if version != VERSION {
            return Err(Error::Integrity(format!(
                "unsupported record version {version}"
            )));
        }
        let spec_hash = SpecHash(bytes[10..42].try_into().unwrap());
        let numer = i64::from_be_bytes(bytes[42..50].try_into().unwrap());
        let denom = i64::from_be_bytes(bytes[50..58].try_into().unwrap());
        if denom <= 0 {
            return Err(bad("nonpositive radius denominator"));
        }
        let count = u64::from_be_bytes(bytes[58..66].try_into().unwrap()) as usize;
        let checksum = &bytes[66..98];
        let body = &bytes[HEADER_LEN..];
        if Sha256::digest(body).as_slice() != checksum {
            return Err(bad("checksum mismatch"));
        }
        let mut pos = 0;
        let mut encodings = Vec::with_capacity(count.min(1 << 20));
        for _ in 0..count {
            let len_bytes = body
                .get(pos..pos + 4)
                .ok_or_else(|| bad("truncated body"))?;
            let len = u32::from_be_bytes(len_bytes.try_into().unwrap()) as usize;
            pos += 4;
            let e = body
                .get(pos..pos + len)
                .ok_or_else(|| bad("truncated body"))?;
            encodings.push(e.to_vec());
            pos += len;
        }
        let mut lengths = Vec::with_capacity(count.min(1 << 20));
        for _ in 0..count {
            lengths.push(read_varint(body, &mut pos).ok_or_else(|| bad("truncated length table"))?);
        }
        if pos != body.len() {
            return Err(bad("trailing bytes after length table"));
        }
        let rec = BallRecord {
            spec_hash,
            radius: Rational::new(numer, denom),
            encodings,
            lengths,
        };
        rec.check().map_err(|e| Error::Integrity(e.to_string()))?;
        Ok(rec)
    }

    /// Entries with length below `r`.
    pub fn restrict(&self, r: &Rational) -> BallRecord {
        let (encodings, lengths) = self
            .encodings
            .iter()
            .zip(&self.lengths)
            .filter(|(_, &l)| rational::lt(l as u64, r))
            .map(|(e, &l)| (e.clone(), l))
            .unzip();
        BallRecord {
            spec_hash: self.spec_hash,
            radius: *r,
            encodings,
            lengths,
        }
    }
}

fn write_varint(out: &mut Vec<u8>, mut v: u32) {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

fn read_varint(buf: &[u8], pos: &mut usize) -> Option<u32> {
    let mut v: u64 = 0;
    for shift in (0..35).step_by(7) {
        let b = *buf.get(*pos)?;
        *pos += 1;
        v |= ((b & 0x7f) as u64) << shift;
        if b & 0x80 == 0 {
            return u32::try_from(v).ok();
        }
    }
    None
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ManifestEntry {
    pub id: String,
    pub spec_hash: SpecHash,
    pub radius: String,
    pub count: usize,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Manifest {
    pub version: u32,
    pub records: Vec<ManifestEntry>,
}

/// A cache directory. Cloning shares the same directory.
#[derive(Clone, Debug)]
pub struct BallStore {
    root: PathBuf,
}

impl BallStore {
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(root.join("records"))?;
        Ok(BallStore { root })
    }

    /// Opens the directory named by `WREATHDIM_CACHE`, if set.
    pub fn from_env() -> Result<Option<Self>> {
        match std::env::var_os(CACHE_ENV) {
            Some(p) if !p.is_empty() => Self::open(PathBuf::from(p)).map(Some),
            _ => Ok(None),
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn record_path(&self, id: &str) -> PathBuf {
        self.root.join("records").join(format!("{id}.ball"))
    }

    fn manifest_path(&self) -> PathBuf {
        self.root.join("manifest.json")
    }

    /// Writes a record atomically; storing identical content again is a
    /// no-op returning the same id.
    pub fn store(&self, rec: &BallRecord) -> Result<String> {
        rec.check()?;
        let (bytes, id) = rec.to_bytes();
        let path = self.record_path(&id);
        if path.exists() {
            let existing = fs::read(&path)?;
            if existing != bytes {
                return Err(Error::Integrity(format!(
                    "record {id} exists with different content"
                )));
            }
            return Ok(id);
        }
        let mut tmp = tempfile::NamedTempFile::new_in(self.root.join("records"))?;
        tmp.write_all(&bytes)?;
        tmp.as_file().sync_all()?;
        match tmp.persist_noclobber(&path) {
            Ok(_) => {}
            Err(e) if path.exists() => {
                drop(e);
                if fs::read(&path)? != bytes {
                    return Err(Error::Integrity(format!(
                        "record {id} raced with different content"
                    )));
                }
            }
            Err(e) => return Err(Error::Io(e.error)),
        }
        let mut manifest = self.manifest()?;
        if !manifest.records.iter().any(|m| m.id == id) {
            manifest.records.push(ManifestEntry {
                id: id.clone(),
                spec_hash: rec.spec_hash,
                radius: rec.radius.to_string(),
                count: rec.count(),
            });
            manifest.records.sort_by(|a, b| a.id.cmp(&b.id));
            self.write_manifest(&manifest)?;
        }
        Ok(id)
    }

    fn write_manifest(&self, manifest: &Manifest) -> Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.root)?;
        serde_json::to_writer_pretty(&mut tmp, manifest)
            .map_err(|e| Error::Integrity(e.to_string()))?;
        tmp.persist(self.manifest_path())
            .map_err(|e| Error::Io(e.error))?;
        Ok(())
    }

    pub fn manifest(&self) -> Result<Manifest> {
        match fs::read(self.manifest_path()) {
            Ok(b) => {
                serde_json::from_slice(&b).map_err(|e| Error::Integrity(format!("manifest: {e}")))
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Manifest {
                version: 1,
                records: Vec::new(),
            }),
            Err(e) => Err(e.into()),
        }
    }

    /// Reads a record by id, verifying checksum and content id.
    pub fn read(&self, id: &str) -> Result<BallRecord> {
        let bytes = fs::read(self.record_path(id))?;
        let rec = BallRecord::from_bytes(&bytes)?;
        if rec.to_bytes().1 != id {
            return Err(Error::Integrity(format!(
                "record {id} does not match its content id"
            )));
        }
        Ok(rec)
    }

    /// Largest stored ball with radius at least `r`, restricted to `r`.
    pub fn load(&self, spec_hash: &SpecHash, r: &Rational) -> Result<Option<BallRecord>> {
        let manifest = self.manifest()?;
        let mut best: Option<(Rational, &ManifestEntry)> = None;
        for m in &manifest.records {
            if m.spec_hash != *spec_hash {
                continue;
            }
            let radius = rational::parse(&m.radius)
                .map_err(|e| Error::Integrity(format!("manifest radius: {e}")))?;
            if radius >= *r && best.as_ref().is_none_or(|(b, _)| radius > *b) {
                best = Some((radius, m));
            }
        }
        match best {
            None => Ok(None),
            Some((_, m)) => {
                let rec = self.read(&m.id)?;
                if rec.spec_hash != *spec_hash {
                    return Err(Error::Integrity(format!(
                        "record {} has a different spec hash",
                        m.id
                    )));
                }
                Ok(Some(rec.restrict(r)))
            }
        }
    }
}
