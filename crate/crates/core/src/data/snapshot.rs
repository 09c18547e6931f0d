//! Snapshot matrix file formats.
//!
//! CSV: a header line `n,m` or `n,m,width,height`, then `m` lines of `n`
//! comma-separated decimals, one line per snapshot.
//!
//! RAW: a 32-byte little-endian header
//!
//! | offset | size | field                       |
//! |--------|------|-----------------------------|
//! | 0      | 4    | magic `SNAP`                |
//! | 4      | 4    | u32 version = 1             |
//! | 8      | 8    | u64 n                       |
//! | 16     | 8    | u64 m                       |
//! | 24     | 4    | u32 flags, bit 0 = mask     |
//! | 28     | 4    | padding                     |
//!
//! followed by `n` mask bytes when bit 0 is set (nonzero = valid location)
//! and `n·m` f64 values in column-major order.

use crate::error::{Error, Result};
use crate::scalar::Real;
use nalgebra::DMatrix;
use std::fs;
use std::io::Write;
use std::path::Path;

pub const RAW_MAGIC: &[u8; 4] = b"SNAP";
pub const RAW_VERSION: u32 = 1;
pub const RAW_HEADER_LEN: usize = 32;
const FLAG_MASK: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapshotFormat {
    Csv,
    Raw,
}

/// `n × m` snapshot matrix, one column per snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotData<T: Real> {
    x: DMatrix<T>,
    mask: Option<Vec<bool>>,
    grid: Option<(usize, usize)>,
}

impl<T: Real> SnapshotData<T> {
    pub fn new(x: DMatrix<T>, mask: Option<Vec<bool>>, grid: Option<(usize, usize)>) -> Result<Self> {
        let n = x.nrows();
        if n == 0 || x.ncols() == 0 {
            return Err(Error::Data("empty snapshot matrix".into()));
        }
        if let Some(m) = &mask {
            if m.len() != n {
                return Err(Error::Data(format!("mask has {} entries for n = {n}", m.len())));
            }
        }
        if let Some((w, h)) = grid {
            if w * h != n {
                return Err(Error::Data(format!("grid {w}x{h} does not match n = {n}")));
            }
        }
        for i in 0..n {
            let valid = mask.as_ref().is_none_or(|m| m[i]);
            if valid && x.row(i).iter().any(|v| !v.is_finite()) {
                return Err(Error::Data(format!("non-finite value at location {i}")));
            }
        }
        Ok(Self { x, mask, grid })
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn m(&self) -> usize {
        self.x.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.x
    }

    pub fn mask(&self) -> Option<&[bool]> {
        self.mask.as_deref()
    }

    pub fn grid(&self) -> Option<(usize, usize)> {
        self.grid
    }

    pub fn is_valid(&self, i: usize) -> bool {
        self.mask.as_ref().is_none_or(|m| m[i])
    }

    /// Location indices that may host a sensor.
    pub fn valid_locations(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.is_valid(i)).collect()
    }

    /// Snapshot matrix with masked-out rows set to zero.
    pub fn masked_matrix(&self) -> DMatrix<T> {
        let mut x = self.x.clone();
        for i in 0..self.n() {
            if !self.is_valid(i) {
                x.row_mut(i).fill(T::zero());
            }
        }
        x
    }

    /// The given snapshots (columns), in order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self {
            x: self.x.select_columns(cols),
            mask: self.mask.clone(),
            grid: self.grid,
        }
    }
}

pub fn load_snapshots<T: Real>(path: &Path, format: SnapshotFormat) -> Result<SnapshotData<T>> {
    match format {
        SnapshotFormat::Csv => read_snapshots_csv(&fs::read(path)?),
        SnapshotFormat::Raw => read_snapshots_raw(&fs::read(path)?),
    }
}

fn parse_dim(field: &str) -> Result<usize> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::Format(format!("bad header field '{field}'")))
}

pub fn read_snapshots_csv<T: Real>(bytes: &[u8]) -> Result<SnapshotData<T>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let mut records = reader.records();
    let header = records
        .next()
        .ok_or_else(|| Error::Format("missing header".into()))?
        .map_err(|e| Error::Format(e.to_string()))?;
    let dims: Vec<usize> = header.iter().map(parse_dim).collect::<Result<_>>()?;
    let (n, m, grid) = match dims[..] {
        [n, m] => (n, m, None),
        [n, m, w, h] => (n, m, Some((w, h))),
        _ => return Err(Error::Format("header must be n,m or n,m,width,height".into())),
    };
    if n == 0 || m == 0 {
        return Err(Error::Format("zero dimension in header".into()));
    }
    let mut x = DMatrix::zeros(n, m);
    for j in 0..m {
        let rec = records
            .next()
            .ok_or_else(|| Error::Format(format!("expected {m} snapshots, found {j}")))?
            .map_err(|e| Error::Format(e.to_string()))?;
        if rec.len() != n {
            return Err(Error::Format(format!("snapshot {j} has {} values, expected {n}", rec.len())));
        }
        for (i, field) in rec.iter().enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| Error::Format(format!("bad number '{field}'")))?;
            x[(i, j)] = T::lit(v);
        }
    }
    if records.next().is_some() {
        return Err(Error::Format(format!("more than {m} snapshots")));
    }
    SnapshotData::new(x, None, grid)
}

fn le_u32(b: &[u8]) -> u32 {
    u32::from_le_bytes(b.try_into().expect("4 bytes"))
}

fn le_u64(b: &[u8]) -> u64 {
    u64::from_le_bytes(b.try_into().expect("8 bytes"))
}

pub fn read_snapshots_raw<T: Real>(bytes: &[u8]) -> Result<SnapshotData<T>> {
    if bytes.len() < RAW_HEADER_LEN {
        return Err(Error::Format("truncated header".into()));
    }
    if &bytes[0..4] != RAW_MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = le_u32(&bytes[4..8]);
    if version != RAW_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let n = le_u64(&bytes[8..16]);
    let m = le_u64(&bytes[16..24]);
    let flags = le_u32(&bytes[24..28]);
    if n == 0 || m == 0 {
        return Err(Error::Format("zero dimension in header".into()));
    }
    let has_mask = flags & FLAG_MASK != 0;
    let mask_len = if has_mask { n } else { 0 };
    let expected = n
        .checked_mul(m)
        .and_then(|c| c.checked_mul(8))
        .and_then(|c| c.checked_add(mask_len))
        .and_then(|c| c.checked_add(RAW_HEADER_LEN as u64))
        .ok_or_else(|| Error::Format("header dimensions overflow".into()))?;
    if (bytes.len() as u64) < expected {
        return Err(Error::Format(format!(
            "payload truncated: {} bytes, expected {expected}",
            bytes.len()
        )));
    }
    if (bytes.len() as u64) > expected {
        return Err(Error::Format("trailing bytes after payload".into()));
    }
    let (n, m) = (n as usize, m as usize);
    let mut pos = RAW_HEADER_LEN;
    let mask = has_mask.then(|| {
        let mk = bytes[pos..pos + n].iter().map(|&b| b != 0).collect();
        pos += n;
        mk
    });
    let values = bytes[pos..]
        .chunks_exact(8)
        .map(|c| T::lit(f64::from_le_bytes(c.try_into().expect("8 bytes"))));
    let x = DMatrix::from_iterator(n, m, values);
    SnapshotData::new(x, mask, None)
}

/// Writes CSV with 17 significant digits, or RAW bit-exactly.
pub fn write_snapshots<T: Real>(
    data: &SnapshotData<T>,
    path: &Path,
    format: SnapshotFormat,
) -> Result<()> {
    let bytes = match format {
        SnapshotFormat::Csv => {
            let mut out = String::new();
            match data.grid {
                Some((w, h)) => out.push_str(&format!("{},{},{w},{h}\n", data.n(), data.m())),
                None => out.push_str(&format!("{},{}\n", data.n(), data.m())),
            }
            for col in data.x.column_iter() {
                let line: Vec<String> = col.iter().map(|v| format!("{:.16e}", v.as_f64())).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
            out.into_bytes()
        }
        SnapshotFormat::Raw => {
            let mut out = Vec::with_capacity(RAW_HEADER_LEN + data.x.len() * 8);
            out.extend_from_slice(RAW_MAGIC);
            out.extend_from_slice(&RAW_VERSION.to_le_bytes());
            out.extend_from_slice(&(data.n() as u64).to_le_bytes());
            out.extend_from_slice(&(data.m() as u64).to_le_bytes());
            let flags = if data.mask.is_some() { FLAG_MASK } else { 0 };
            out.extend_from_slice(&flags.to_le_bytes());
            out.extend_from_slice(&[0u8; 4]);
            if let Some(mask) = &data.mask {
                out.extend(mask.iter().map(|&v| u8::from(v)));
            }
            for v in data.x.iter() {
                out.extend_from_slice(&v.as_f64().to_le_bytes());
            }
            out
        }
    };
    let mut f = fs::File::create(path)?;
    f.write_all(&bytes)?;
    Ok(())
}
