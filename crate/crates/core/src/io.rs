//! Point set file formats.
//!
//! Text: a header line `n d`, then `n` lines of `d` whitespace-separated floats.
//!
//! Binary: the 8 magic bytes `MEANEST1`, `n` and `d` as little-endian `u64`,
//! then `n * d` little-endian `f64` values in row-major order.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::point::PointSet;

pub const MAGIC: &[u8; 8] = b"MEANEST1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Binary,
}

impl Format {
    /// `.bin` selects the binary format, anything else is text.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("bin") => Format::Binary,
            _ => Format::Text,
        }
    }
}

pub fn encode_text(points: &PointSet) -> String {
    let mut out = String::with_capacity(points.len() * points.dim() * 12);
    out.push_str(&format!("{} {}\n", points.len(), points.dim()));
    for row in points.rows() {
        let line: Vec<String> = row.iter().map(|x| format!("{x:?}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn decode_text(text: &str) -> Result<PointSet> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Format("missing header line".into()))?;
    let mut it = header.split_whitespace();
    let (n, d) = match (it.next(), it.next(), it.next()) {
        (Some(n), Some(d), None) => (parse_count(n)?, parse_count(d)?),
        _ => return Err(Error::Format(format!("header must be `n d`, got {header:?}"))),
    };
    let mut data = Vec::with_capacity(n.saturating_mul(d).min(1 << 24));
    for (row, line) in lines.enumerate() {
        if row >= n {
            return Err(Error::Format(format!("more than the declared {n} rows")));
        }
        let before = data.len();
        for tok in line.split_whitespace() {
            let x: f64 = tok
                .parse()
                .map_err(|_| Error::Format(format!("row {}: bad number {tok:?}", row + 1)))?;
            data.push(x);
        }
        if data.len() - before != d {
            return Err(Error::Format(format!(
                "row {} has {} values, expected {d}",
                row + 1,
                data.len() - before
            )));
        }
    }
    if data.len() != n * d {
        return Err(Error::Format(format!("expected {n} rows, found {}", data.len() / d.max(1))));
    }
    PointSet::from_flat(d, data)
}

fn parse_count(tok: &str) -> Result<usize> {
    tok.parse().map_err(|_| Error::Format(format!("bad count {tok:?} in header")))
}

pub fn encode_binary(points: &PointSet) -> Vec<u8> {
    let mut out = Vec::with_capacity(24 + points.as_flat().len() * 8);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(points.len() as u64).to_le_bytes());
    out.extend_from_slice(&(points.dim() as u64).to_le_bytes());
    for x in points.as_flat() {
        out.extend_from_slice(&x.to_le_bytes());
    }
    out
}

pub fn decode_binary(bytes: &[u8]) -> Result<PointSet> {
    if bytes.len() < 24 || &bytes[..8] != MAGIC {
        return Err(Error::Format("missing MEANEST1 header".into()));
    }
    let word = |at: usize| u64::from_le_bytes(bytes[at..at + 8].try_into().unwrap());
    let n = usize::try_from(word(8)).map_err(|_| Error::Format("n overflows".into()))?;
    let d = usize::try_from(word(16)).map_err(|_| Error::Format("d overflows".into()))?;
    let count = n.checked_mul(d).ok_or_else(|| Error::Format("n * d overflows".into()))?;
    let body = &bytes[24..];
    if Some(body.len()) != count.checked_mul(8) {
        return Err(Error::Format(format!(
            "payload is {} bytes, expected {n} x {d} f64 values",
            body.len()
        )));
    }
    let data = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    PointSet::from_flat(d, data)
}

/// Reads either format, detected by the magic prefix.
pub fn read_points(path: &Path) -> Result<PointSet> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.starts_with(MAGIC) {
        decode_binary(&bytes)
    } else {
        let text = std::str::from_utf8(&bytes)
            .map_err(|_| Error::Format("text file is not valid UTF-8".into()))?;
        decode_text(text)
    }
}

pub fn write_points(path: &Path, points: &PointSet, format: Format) -> Result<()> {
    let write = || -> io::Result<()> {
        let mut w = BufWriter::new(fs::File::create(path)?);
        match format {
            Format::Text => w.write_all(encode_text(points).as_bytes())?,
            Format::Binary => w.write_all(&encode_binary(points))?,
        }
        w.flush()
    };
    write().map_err(|e| Error::io(path, e))
}
