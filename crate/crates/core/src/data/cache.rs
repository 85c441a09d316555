//! Binary dataset cache.
//!
//! Layout (little-endian):
//!
//! ```text
//! magic      8 bytes  "LUCIDDS\0"
//! version    u8
//! n          u64      rows
//! p          u32      features
//! label_name str      (u32 length + UTF-8)
//! p times:   name str, column str, kind u8, kind payload
//! label      ceil(n/64) u64 words
//! p times:   ceil(n/64) u64 words
//! ```
//!
//! Kind tags: 0 threshold (f64), 1 interval (f64, f64), 2 category (str),
//! 3 binary, 4 missing.

use std::io::{Read, Write};
use std::path::Path;

use crate::bitvec::BitVector;
use crate::data::dataset::{Dataset, FeatureInfo, FeatureKind};
use crate::error::{Error, Result};

pub const CACHE_MAGIC: &[u8; 8] = b"LUCIDDS\0";
pub const CACHE_VERSION: u8 = 1;

pub fn write_cache(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut buf = Vec::new();
    write_cache_to(ds, &mut buf).map_err(|e| Error::io(path, e))?;
    std::fs::write(path, buf).map_err(|e| Error::io(path, e))
}

pub fn write_cache_to<W: Write>(ds: &Dataset, w: &mut W) -> std::io::Result<()> {
    w.write_all(CACHE_MAGIC)?;
    w.write_all(&[CACHE_VERSION])?;
    w.write_all(&(ds.n() as u64).to_le_bytes())?;
    w.write_all(&(ds.p() as u32).to_le_bytes())?;
    write_str(w, ds.label_name())?;
    for f in ds.features() {
        write_str(w, &f.name)?;
        write_str(w, &f.column)?;
        match &f.kind {
            FeatureKind::Threshold { threshold } => {
                w.write_all(&[0])?;
                w.write_all(&threshold.to_bits().to_le_bytes())?;
            }
            FeatureKind::Interval { lo, hi } => {
                w.write_all(&[1])?;
                w.write_all(&lo.to_bits().to_le_bytes())?;
                w.write_all(&hi.to_bits().to_le_bytes())?;
            }
            FeatureKind::Category { value } => {
                w.write_all(&[2])?;
                write_str(w, value)?;
            }
            FeatureKind::Binary => w.write_all(&[3])?,
            FeatureKind::Missing => w.write_all(&[4])?,
        }
    }
    write_words(w, ds.label())?;
    for c in ds.columns() {
        write_words(w, c)?;
    }
    Ok(())
}

fn write_str<W: Write>(w: &mut W, s: &str) -> std::io::Result<()> {
    w.write_all(&(s.len() as u32).to_le_bytes())?;
    w.write_all(s.as_bytes())
}

fn write_words<W: Write>(w: &mut W, bv: &BitVector) -> std::io::Result<()> {
    for word in bv.words() {
        w.write_all(&word.to_le_bytes())?;
    }
    Ok(())
}

/// True if the file starts with the cache magic.
pub fn is_cache_file(path: impl AsRef<Path>) -> bool {
    let mut head = [0u8; 8];
    std::fs::File::open(path)
        .and_then(|mut f| f.read_exact(&mut head))
        .map(|_| &head == CACHE_MAGIC)
        .unwrap_or(false)
}

pub fn read_cache(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    read_cache_from(&mut bytes.as_slice())
}

pub fn read_cache_from<R: Read>(r: &mut R) -> Result<Dataset> {
    let mut magic = [0u8; 8];
    read_exact(r, &mut magic)?;
    if &magic != CACHE_MAGIC {
        return Err(Error::Cache("bad magic header".into()));
    }
    let version = read_u8(r)?;
    if version != CACHE_VERSION {
        return Err(Error::Cache(format!("unsupported version {version}")));
    }
    let n = read_u64(r)? as usize;
    let p = read_u32(r)? as usize;
    let label_name = read_str(r)?;
    let mut features = Vec::with_capacity(p.min(1 << 16));
    for _ in 0..p {
        let name = read_str(r)?;
        let column = read_str(r)?;
        let kind = match read_u8(r)? {
            0 => FeatureKind::Threshold {
                threshold: f64::from_bits(read_u64(r)?),
            },
            1 => FeatureKind::Interval {
                lo: f64::from_bits(read_u64(r)?),
                hi: f64::from_bits(read_u64(r)?),
            },
            2 => FeatureKind::Category { value: read_str(r)? },
            3 => FeatureKind::Binary,
            4 => FeatureKind::Missing,
            t => return Err(Error::Cache(format!("unknown feature kind tag {t}"))),
        };
        features.push(FeatureInfo { name, column, kind });
    }
    let label = read_words(r, n)?;
    let columns = (0..p).map(|_| read_words(r, n)).collect::<Result<Vec<_>>>()?;
    let mut rest = [0u8; 1];
    if r.read(&mut rest).map_err(|e| Error::Cache(e.to_string()))? != 0 {
        return Err(Error::Cache("trailing bytes".into()));
    }
    Dataset::new(features, columns, label, label_name)
}

fn read_exact<R: Read>(r: &mut R, buf: &mut [u8]) -> Result<()> {
    r.read_exact(buf)
        .map_err(|_| Error::Cache("unexpected end of file".into()))
}

fn read_u8<R: Read>(r: &mut R) -> Result<u8> {
    let mut b = [0u8; 1];
    read_exact(r, &mut b)?;
    Ok(b[0])
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact(r, &mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_str<R: Read>(r: &mut R) -> Result<String> {
    let len = read_u32(r)? as usize;
    if len > 1 << 20 {
        return Err(Error::Cache(format!("string length {len} too large")));
    }
    let mut b = vec![0u8; len];
    read_exact(r, &mut b)?;
    String::from_utf8(b).map_err(|_| Error::Cache("invalid UTF-8".into()))
}

fn read_words<R: Read>(r: &mut R, n: usize) -> Result<BitVector> {
    let words = (0..n.div_ceil(64)).map(|_| read_u64(r)).collect::<Result<Vec<_>>>()?;
    let bv = BitVector::from_words(n, words.clone());
    if bv.words() != words.as_slice() {
        return Err(Error::Cache("bits set past the row count".into()));
    }
    Ok(bv)
}
