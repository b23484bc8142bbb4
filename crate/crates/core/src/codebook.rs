//! Labelled dictionaries of tensors with bulk cosine readout.
//!
//! Rows are kept L2-normalised next to their original norms, so a readout
//! is one matrix-vector product followed by a single normalisation of the
//! query.
//!
//! # Binary container
//!
//! All integers and floats are little-endian.
//!
//! ```text
//! magic      8 bytes   "GCVSACB\0"
//! version    u32       1
//! n          u32
//! n_theta    u32
//! n_s        u32
//! s_min      f64
//! growth     f64
//! seed       u64
//! count      u64       number of keys / rows
//! dim        u64       row length, n_s * n_theta * n^3
//! keys       count x { tag: u8, payload }
//!              0 symbol  u32 byte length + UTF-8 bytes
//!              1 index   i64
//!              2 scalar  f64
//!              3 point   f64 x, f64 y
//! payload    count * dim f64, row-major, original (unnormalised) values
//! ```

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::hash::{Hash, Hasher};
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{same_config, GridConfig};
use crate::error::{Result, VsaError};
use crate::tensor::GcTensor;

const MAGIC: &[u8; 8] = b"GCVSACB\0";
const VERSION: u32 = 1;
const PARALLEL_ROWS: usize = 64;

/// Codebook label. Floating-point keys compare by bit pattern.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Key {
    Symbol(String),
    Index(i64),
    Scalar(f64),
    Point(f64, f64),
}

impl Key {
    pub fn symbol(s: impl Into<String>) -> Self {
        Key::Symbol(s.into())
    }

    pub fn as_scalar(&self) -> Option<f64> {
        match *self {
            Key::Scalar(x) => Some(x),
            Key::Index(i) => Some(i as f64),
            _ => None,
        }
    }

    pub fn as_point(&self) -> Option<(f64, f64)> {
        match *self {
            Key::Point(x, y) => Some((x, y)),
            _ => None,
        }
    }

    pub fn as_symbol(&self) -> Option<&str> {
        match self {
            Key::Symbol(s) => Some(s),
            _ => None,
        }
    }
}

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Key::Symbol(a), Key::Symbol(b)) => a == b,
            (Key::Index(a), Key::Index(b)) => a == b,
            (Key::Scalar(a), Key::Scalar(b)) => a.to_bits() == b.to_bits(),
            (Key::Point(ax, ay), Key::Point(bx, by)) => {
                ax.to_bits() == bx.to_bits() && ay.to_bits() == by.to_bits()
            }
            _ => false,
        }
    }
}

impl Eq for Key {}

impl Hash for Key {
    fn hash<H: Hasher>(&self, state: &mut H) {
        std::mem::discriminant(self).hash(state);
        match self {
            Key::Symbol(s) => s.hash(state),
            Key::Index(i) => i.hash(state),
            Key::Scalar(x) => x.to_bits().hash(state),
            Key::Point(x, y) => {
                x.to_bits().hash(state);
                y.to_bits().hash(state);
            }
        }
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Key::Symbol(s) => f.write_str(s),
            Key::Index(i) => write!(f, "{i}"),
            Key::Scalar(x) => write!(f, "{x}"),
            Key::Point(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

impl From<&str> for Key {
    fn from(s: &str) -> Self {
        Key::Symbol(s.to_owned())
    }
}

#[derive(Debug, Clone)]
pub struct Codebook {
    config: Arc<GridConfig>,
    keys: Vec<Key>,
    index: HashMap<Key, usize>,
    unit_rows: Vec<f64>,
    norms: Vec<f64>,
}

impl Codebook {
    pub fn new(config: &Arc<GridConfig>) -> Self {
        Self {
            config: Arc::clone(config),
            keys: Vec::new(),
            index: HashMap::new(),
            unit_rows: Vec::new(),
            norms: Vec::new(),
        }
    }

    pub fn from_entries<I>(config: &Arc<GridConfig>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Key, GcTensor)>,
    {
        let mut cb = Self::new(config);
        for (k, v) in entries {
            cb.insert(k, &v)?;
        }
        Ok(cb)
    }

    /// Builds one row per key with `make`, in parallel. Row order follows
    /// `keys`.
    pub fn build<F>(config: &Arc<GridConfig>, keys: Vec<Key>, make: F) -> Result<Self>
    where
        F: Fn(&Key) -> GcTensor + Sync,
    {
        let rows: Vec<GcTensor> = keys.par_iter().map(&make).collect();
        let mut cb = Self::new(config);
        cb.keys.reserve(keys.len());
        cb.unit_rows.reserve(keys.len() * config.dim());
        for (k, v) in keys.into_iter().zip(rows) {
            cb.insert(k, &v)?;
        }
        Ok(cb)
    }

    pub fn insert(&mut self, key: Key, v: &GcTensor) -> Result<()> {
        if !same_config(&self.config, v.config()) {
            return Err(VsaError::ConfigMismatch);
        }
        if self.index.contains_key(&key) {
            return Err(VsaError::DuplicateKey(key.to_string()));
        }
        let norm = v.norm();
        if norm == 0.0 {
            return Err(VsaError::ZeroNorm);
        }
        self.index.insert(key.clone(), self.keys.len());
        self.keys.push(key);
        self.unit_rows.extend(v.data().iter().map(|x| x / norm));
        self.norms.push(norm);
        Ok(())
    }

    pub fn config(&self) -> &Arc<GridConfig> {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[Key] {
        &self.keys
    }

    pub fn key(&self, i: usize) -> &Key {
        &self.keys[i]
    }

    pub fn index_of(&self, key: &Key) -> Option<usize> {
        self.index.get(key).copied()
    }

    fn unit_row(&self, i: usize) -> &[f64] {
        let dim = self.config.dim();
        &self.unit_rows[i * dim..(i + 1) * dim]
    }

    /// The stored tensor at row `i`.
    pub fn entry(&self, i: usize) -> GcTensor {
        let norm = self.norms[i];
        let data = self.unit_row(i).iter().map(|x| x * norm).collect();
        GcTensor::from_vec(&self.config, data).expect("row length matches config")
    }

    pub fn get(&self, key: &Key) -> Option<GcTensor> {
        self.index_of(key).map(|i| self.entry(i))
    }

    /// Cosine similarity of `v` against every row, in key order.
    pub fn similarities(&self, v: &GcTensor) -> Result<Vec<f64>> {
        if self.is_empty() {
            return Err(VsaError::Empty("codebook has no entries"));
        }
        if !same_config(&self.config, v.config()) {
            return Err(VsaError::ConfigMismatch);
        }
        let norm = v.norm();
        if norm == 0.0 {
            return Err(VsaError::ZeroNorm);
        }
        let q = v.data();
        let dot = |row: &[f64]| -> f64 {
            let s: f64 = row.iter().zip(q).map(|(a, b)| a * b).sum();
            (s / norm).clamp(-1.0, 1.0)
        };
        let dim = self.config.dim();
        Ok(if self.len() >= PARALLEL_ROWS {
            self.unit_rows.par_chunks_exact(dim).map(dot).collect()
        } else {
            self.unit_rows.chunks_exact(dim).map(dot).collect()
        })
    }

    /// Full similarity profile paired with keys.
    pub fn readout(&self, v: &GcTensor) -> Result<Vec<(Key, f64)>> {
        Ok(self
            .keys
            .iter()
            .cloned()
            .zip(self.similarities(v)?)
            .collect())
    }

    /// Best-matching row index and its similarity; ties go to the lowest
    /// index.
    pub fn cleanup_index(&self, v: &GcTensor) -> Result<(usize, f64)> {
        Ok(argmax(&self.similarities(v)?))
    }

    pub fn cleanup(&self, v: &GcTensor) -> Result<(Key, f64)> {
        let (i, s) = self.cleanup_index(v)?;
        Ok((self.keys[i].clone(), s))
    }

    /// Weighted sum of the stored rows.
    pub fn superpose(&self, weights: &[f64]) -> Result<GcTensor> {
        if weights.len() != self.len() {
            return Err(VsaError::LengthMismatch {
                expected: self.len(),
                actual: weights.len(),
            });
        }
        let dim = self.config.dim();
        let mut out = vec![0.0; dim];
        for (i, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let c = w * self.norms[i];
            for (o, x) in out.iter_mut().zip(self.unit_row(i)) {
                *o += c * x;
            }
        }
        GcTensor::from_vec(&self.config, out)
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        let cfg = &self.config;
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        for v in [cfg.n, cfg.n_theta, cfg.n_s] {
            w.write_all(&to_u32(v)?.to_le_bytes())?;
        }
        w.write_all(&cfg.s_min.to_le_bytes())?;
        w.write_all(&cfg.growth.to_le_bytes())?;
        w.write_all(&cfg.seed.to_le_bytes())?;
        w.write_all(&(self.len() as u64).to_le_bytes())?;
        w.write_all(&(cfg.dim() as u64).to_le_bytes())?;
        for key in &self.keys {
            match key {
                Key::Symbol(s) => {
                    w.write_all(&[0])?;
                    w.write_all(&to_u32(s.len())?.to_le_bytes())?;
                    w.write_all(s.as_bytes())?;
                }
                Key::Index(i) => {
                    w.write_all(&[1])?;
                    w.write_all(&i.to_le_bytes())?;
                }
                Key::Scalar(x) => {
                    w.write_all(&[2])?;
                    w.write_all(&x.to_le_bytes())?;
                }
                Key::Point(x, y) => {
                    w.write_all(&[3])?;
                    w.write_all(&x.to_le_bytes())?;
                    w.write_all(&y.to_le_bytes())?;
                }
            }
        }
        for i in 0..self.len() {
            let norm = self.norms[i];
            for x in self.unit_row(i) {
                w.write_all(&(x * norm).to_le_bytes())?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(VsaError::Format("bad magic".into()));
        }
        let version = read_u32(&mut r)?;
        if version != VERSION {
            return Err(VsaError::Format(format!("unsupported version {version}")));
        }
        let config = GridConfig {
            n: read_u32(&mut r)? as usize,
            n_theta: read_u32(&mut r)? as usize,
            n_s: read_u32(&mut r)? as usize,
            s_min: read_f64(&mut r)?,
            growth: read_f64(&mut r)?,
            seed: read_u64(&mut r)?,
        }
        .shared()?;
        let count = read_u64(&mut r)? as usize;
        let dim = read_u64(&mut r)? as usize;
        if dim != config.dim() {
            return Err(VsaError::Format(format!(
                "row length {dim} does not match config ({})",
                config.dim()
            )));
        }
        let mut keys = Vec::with_capacity(count.min(1 << 20));
        for _ in 0..count {
            let mut tag = [0u8; 1];
            r.read_exact(&mut tag)?;
            keys.push(match tag[0] {
                0 => {
                    let len = read_u32(&mut r)? as usize;
                    let mut bytes = vec![0u8; len];
                    r.read_exact(&mut bytes)?;
                    Key::Symbol(
                        String::from_utf8(bytes)
                            .map_err(|_| VsaError::Format("symbol key is not UTF-8".into()))?,
                    )
                }
                1 => Key::Index(read_u64(&mut r)? as i64),
                2 => Key::Scalar(read_f64(&mut r)?),
                3 => Key::Point(read_f64(&mut r)?, read_f64(&mut r)?),
                t => return Err(VsaError::Format(format!("unknown key tag {t}"))),
            });
        }
        let mut cb = Codebook::new(&config);
        for key in keys {
            let mut row = Vec::with_capacity(dim);
            for _ in 0..dim {
                row.push(read_f64(&mut r)?);
            }
            cb.insert(key, &GcTensor::from_vec(&config, row)?)?;
        }
        Ok(cb)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_to(BufWriter::new(File::create(path)?))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_from(BufReader::new(File::open(path)?))
    }
}

/// Index and value of the maximum; the first maximum wins ties.
pub fn argmax(values: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, &v) in values.iter().enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}

fn to_u32(v: usize) -> Result<u32> {
    u32::try_from(v).map_err(|_| VsaError::Format(format!("{v} does not fit in u32")))
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}
