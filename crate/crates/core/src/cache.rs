//! On-disk cache of sweep results.
//!
//! One file per `(s, D, engine version)`. The file starts with a magic line,
//! the version and a SHA-256 checksum of the JSON payload that follows.
//! Corrupted or stale entries are reported and recomputed.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::PowerVector;
use crate::rational::{format_fraction, parse_rational, Rational};
use crate::render::{sweep, SweepResult, SweepSource};

/// Bumped whenever sweep semantics or the file layout change.
pub const ENGINE_VERSION: u32 = 1;

const MAGIC: &str = "committee-power-sweep";

#[derive(Serialize, Deserialize)]
struct Payload {
    s: String,
    denominator: u32,
    denominator_of_power: u64,
    swing_counts: Vec<[u64; 3]>,
    point_power: Vec<u32>,
}

pub fn encode(result: &SweepResult, version: u32) -> Result<Vec<u8>> {
    let payload = Payload {
        s: format_fraction(result.s()),
        denominator: result.denominator(),
        denominator_of_power: result.powers().first().map_or(1, PowerVector::denominator),
        swing_counts: result
            .powers()
            .iter()
            .map(|p| {
                [
                    p.swing_counts()[0],
                    p.swing_counts()[1],
                    p.swing_counts()[2],
                ]
            })
            .collect(),
        point_power: result.point_power_indices().to_vec(),
    };
    let body = serde_json::to_vec(&payload).map_err(|e| Error::Encoding(e.to_string()))?;
    let mut out = format!(
        "{MAGIC}\nversion {version}\nchecksum {}\n",
        hex::encode(Sha256::digest(&body))
    )
    .into_bytes();
    out.extend_from_slice(&body);
    Ok(out)
}

pub fn decode(bytes: &[u8], version: u32) -> Result<SweepResult> {
    let bad = |m: &str| Error::Encoding(format!("cache entry: {m}"));
    let mut parts = bytes.splitn(4, |&b| b == b'\n');
    let magic = parts.next().ok_or_else(|| bad("empty"))?;
    let ver = parts.next().ok_or_else(|| bad("missing version"))?;
    let sum = parts.next().ok_or_else(|| bad("missing checksum"))?;
    let body = parts.next().ok_or_else(|| bad("missing payload"))?;
    if magic != MAGIC.as_bytes() {
        return Err(bad("wrong magic"));
    }
    if ver != format!("version {version}").as_bytes() {
        return Err(bad("version mismatch"));
    }
    let expected = format!("checksum {}", hex::encode(Sha256::digest(body)));
    if sum != expected.as_bytes() {
        return Err(bad("checksum mismatch"));
    }
    let payload: Payload = serde_json::from_slice(body).map_err(|e| bad(&e.to_string()))?;
    let powers = payload
        .swing_counts
        .into_iter()
        .map(|c| PowerVector::new(c.to_vec(), payload.denominator_of_power))
        .collect::<Result<Vec<_>>>()?;
    SweepResult::from_parts(
        parse_rational(&payload.s)?,
        payload.denominator,
        powers,
        payload.point_power,
    )
}

/// Sweep cache rooted at a directory.
#[derive(Debug)]
pub struct SweepCache {
    dir: PathBuf,
    version: u32,
    hits: AtomicUsize,
    computed: AtomicUsize,
    warnings: Mutex<Vec<String>>,
}

impl SweepCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self::with_version(dir, ENGINE_VERSION)
    }

    pub fn with_version(dir: impl Into<PathBuf>, version: u32) -> Self {
        SweepCache {
            dir: dir.into(),
            version,
            hits: AtomicUsize::new(0),
            computed: AtomicUsize::new(0),
            warnings: Mutex::new(Vec::new()),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, s: &Rational, denominator: u32) -> PathBuf {
        let key = format!(
            "s={};D={};v={}",
            format_fraction(s),
            denominator,
            self.version
        );
        let digest = hex::encode(&Sha256::digest(key.as_bytes())[..12]);
        self.dir.join(format!("sweep-{digest}.cache"))
    }

    /// Cached sweep, or `None` if absent, stale or corrupted.
    pub fn get(&self, s: &Rational, denominator: u32) -> Option<SweepResult> {
        let path = self.path_for(s, denominator);
        let bytes = fs::read(&path).ok()?;
        match decode(&bytes, self.version) {
            Ok(r) if r.s() == s && r.denominator() == denominator => Some(r),
            Ok(_) => {
                self.warn(format!("{}: key collision, recomputing", path.display()));
                None
            }
            Err(e) => {
                self.warn(format!("{}: {e}, recomputing", path.display()));
                None
            }
        }
    }

    /// Stores a sweep. Another process holding the lock wins; this call then
    /// leaves the entry alone.
    pub fn put(&self, result: &SweepResult) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        let path = self.path_for(result.s(), result.denominator());
        let lock = path.with_extension("lock");
        match fs::OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(&lock)
        {
            Ok(_) => {}
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => return Ok(()),
            Err(e) => return Err(Error::io(&lock, e)),
        }
        let outcome = (|| {
            let tmp = path.with_extension("tmp");
            let mut f = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
            f.write_all(&encode(result, self.version)?)
                .map_err(|e| Error::io(&tmp, e))?;
            f.sync_all().map_err(|e| Error::io(&tmp, e))?;
            fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))
        })();
        let _ = fs::remove_file(&lock);
        outcome
    }

    /// Number of sweeps served from disk.
    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::Relaxed)
    }

    /// Number of sweeps computed because no usable entry existed.
    pub fn computed(&self) -> usize {
        self.computed.load(Ordering::Relaxed)
    }

    pub fn take_warnings(&self) -> Vec<String> {
        std::mem::take(&mut *self.warnings.lock().expect("warning lock"))
    }

    fn warn(&self, message: String) {
        self.warnings.lock().expect("warning lock").push(message);
    }
}

impl SweepSource for SweepCache {
    fn sweep(&self, s: &Rational, denominator: u32) -> Result<SweepResult> {
        if let Some(hit) = self.get(s, denominator) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(hit);
        }
        let result = sweep(s, denominator)?;
        self.computed.fetch_add(1, Ordering::Relaxed);
        self.put(&result)?;
        Ok(result)
    }
}
