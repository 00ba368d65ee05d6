//! Point-set readers and writers.
//!
//! CSV: one `x,y,z` record per line, optional header, `#` comments.
//! JSON: an array of `[x, y, z]` triples.

use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde_json::Value;

use crate::error::{FitError, Result};
use crate::linalg3::Point3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// `.json` means JSON, anything else CSV.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

/// Whether the first CSV record is a header.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Header {
    /// A header is assumed when no field of the first record parses as a number.
    #[default]
    Auto,
    Present,
    Absent,
}

fn parse_error(row: usize, column: usize, reason: impl Into<String>) -> FitError {
    FitError::Parse { row, column, reason: reason.into() }
}

fn finite(value: f64, row: usize, column: usize) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(parse_error(row, column, format!("non-finite value {value}")))
    }
}

/// Reads a point set. Rows and columns in errors are 1-based.
pub fn parse_points<R: Read>(source: R, format: Format, header: Header) -> Result<Vec<Point3>> {
    let points = match format {
        Format::Csv => parse_csv(source, header)?,
        Format::Json => parse_json(source)?,
    };
    if points.is_empty() {
        return Err(FitError::EmptyInput);
    }
    Ok(points)
}

fn parse_csv<R: Read>(source: R, header: Header) -> Result<Vec<Point3>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(source);

    let mut points = Vec::new();
    let mut first = true;
    for record in reader.records() {
        let record = record.map_err(|e| {
            let row = e.position().map_or(0, |p| p.line() as usize);
            parse_error(row, 0, e.to_string())
        })?;
        let row = record.position().map_or(0, |p| p.line() as usize);
        let is_first = std::mem::replace(&mut first, false);

        if is_first {
            let skip = match header {
                Header::Present => true,
                Header::Absent => false,
                Header::Auto => record.iter().all(|f| f.parse::<f64>().is_err()),
            };
            if skip {
                continue;
            }
        }
        if record.len() != 3 {
            return Err(parse_error(
                row,
                record.len().min(3) + 1,
                format!("expected 3 fields, found {}", record.len()),
            ));
        }
        let mut xyz = [0.0; 3];
        for (i, field) in record.iter().enumerate() {
            let value = field
                .parse::<f64>()
                .map_err(|_| parse_error(row, i + 1, format!("`{field}` is not a number")))?;
            xyz[i] = finite(value, row, i + 1)?;
        }
        points.push(Point3::from(xyz));
    }
    Ok(points)
}

fn parse_json<R: Read>(source: R) -> Result<Vec<Point3>> {
    let value: Value = serde_json::from_reader(source)
        .map_err(|e| parse_error(e.line(), e.column(), e.to_string()))?;
    let rows = value
        .as_array()
        .ok_or_else(|| parse_error(0, 0, "expected a JSON array of [x, y, z] triples"))?;
    rows.iter()
        .enumerate()
        .map(|(i, item)| {
            let row = i + 1;
            let triple = item
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| parse_error(row, 0, "expected an array of 3 numbers"))?;
            let mut xyz = [0.0; 3];
            for (j, v) in triple.iter().enumerate() {
                let x = v
                    .as_f64()
                    .ok_or_else(|| parse_error(row, j + 1, format!("`{v}` is not a number")))?;
                xyz[j] = finite(x, row, j + 1)?;
            }
            Ok(Point3::from(xyz))
        })
        .collect()
}

/// Writes points in `format`; CSV gets an `x,y,z` header. Values use the
/// shortest representation that round-trips.
pub fn write_points<W: Write>(mut out: W, points: &[Point3], format: Format) -> Result<()> {
    match format {
        Format::Csv => {
            writeln!(out, "x,y,z")?;
            for p in points {
                writeln!(out, "{},{},{}", p.x, p.y, p.z)?;
            }
        }
        Format::Json => {
            let rows: Vec<[f64; 3]> = points.iter().map(|p| p.to_array()).collect();
            serde_json::to_writer(&mut out, &rows).map_err(|e| FitError::Io(e.to_string()))?;
            writeln!(out)?;
        }
    }
    Ok(())
}
