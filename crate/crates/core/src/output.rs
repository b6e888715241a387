//! Report formatting: fixed 9-decimal numbers, the curve CSV layout and
//! all-or-nothing file writes.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::sweep::SweepPoint;

/// Header of a curve file.
pub const CURVE_HEADER: [&str; 6] = [
    "bits_level",
    "block_count",
    "conditional_bits",
    "normalized_conditional",
    "boundary_fraction",
    "gamma",
];

/// Formats with 9 decimal places, ties to even, `.` separator.
pub fn fmt_real(x: f64) -> String {
    let s = format!("{x:.9}");
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_owned()
    } else {
        s
    }
}

/// Serializes curve points as CSV.
pub fn curve_to_csv(points: &[SweepPoint]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CURVE_HEADER)?;
    for p in points {
        w.write_record([
            p.bits_level.to_string(),
            p.block_count.to_string(),
            fmt_real(p.conditional_bits),
            fmt_real(p.normalized_conditional),
            fmt_real(p.boundary_fraction),
            fmt_real(p.gamma),
        ])?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

/// Reads a curve file written by [`curve_to_csv`].
pub fn curve_from_csv<R: Read>(input: R) -> Result<Vec<SweepPoint>> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(CURVE_HEADER) {
        return Err(Error::InvalidArgument(format!(
            "curve header must be `{}`",
            CURVE_HEADER.join(",")
        )));
    }
    let mut points: Vec<SweepPoint> = Vec::new();
    for record in r.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| -> Result<&str> {
            record.get(i).ok_or(Error::RaggedRow {
                line,
                expected: CURVE_HEADER.len(),
                found: record.len(),
            })
        };
        let num = |i: usize| -> Result<f64> {
            let raw = field(i)?;
            raw.parse().map_err(|_| Error::Unparsable {
                line,
                column: CURVE_HEADER[i].to_owned(),
                value: raw.to_owned(),
            })
        };
        let int = |i: usize| -> Result<u64> {
            let raw = field(i)?;
            raw.parse().map_err(|_| Error::Unparsable {
                line,
                column: CURVE_HEADER[i].to_owned(),
                value: raw.to_owned(),
            })
        };
        let point = SweepPoint {
            bits_level: int(0)? as u32,
            block_count: int(1)? as usize,
            conditional_bits: num(2)?,
            normalized_conditional: num(3)?,
            boundary_fraction: num(4)?,
            gamma: num(5)?,
        };
        if points
            .last()
            .is_some_and(|prev| prev.bits_level >= point.bits_level)
        {
            return Err(Error::InvalidArgument(format!(
                "line {line}: curve rows must be ordered by bits_level"
            )));
        }
        points.push(point);
    }
    Ok(points)
}

/// Writes `bytes` to `path` through a temporary file in the same directory, so
/// the target is either absent, unchanged, or complete.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}
