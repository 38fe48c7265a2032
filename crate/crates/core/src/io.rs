//! Serialization helpers: JSON with floats fixed at 17 significant digits
//! (so identical inputs give byte-identical reports) and CSV tables.

use crate::error::Result;
use serde::Serialize;
use serde_json::ser::Formatter;
use std::io::{self, Write};
use std::path::Path;

/// Compact JSON whose floats print as `{:.16e}`; non-finite values become `null`.
#[derive(Clone, Copy, Debug, Default)]
pub struct FixedDigits;

impl FixedDigits {
    fn float<W: ?Sized + Write>(writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }
}

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        Self::float(writer, value)
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        Self::float(writer, value as f64)
    }
}

pub fn to_json_writer<W: Write, T: Serialize + ?Sized>(writer: W, value: &T) -> Result<()> {
    let mut ser = serde_json::Serializer::with_formatter(writer, FixedDigits);
    value.serialize(&mut ser)?;
    Ok(())
}

pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    to_json_writer(&mut buf, value)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut file = io::BufWriter::new(std::fs::File::create(path)?);
    to_json_writer(&mut file, value)?;
    file.write_all(b"\n")?;
    file.flush()?;
    Ok(())
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_reader(io::BufReader::new(std::fs::File::open(path)?))?)
}

/// Writes serializable rows with a header taken from the field names.
pub fn write_csv_rows<W: Write, T: Serialize>(writer: W, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct SpectrumRow {
    index: usize,
    eigenvalue: f64,
}

/// `index,eigenvalue` table.
pub fn write_spectrum_csv<W: Write>(writer: W, eigenvalues: &[f64]) -> Result<()> {
    let rows: Vec<SpectrumRow> = eigenvalues.iter().enumerate().map(|(index, &eigenvalue)| SpectrumRow { index, eigenvalue }).collect();
    write_csv_rows(writer, &rows)
}

pub fn write_csv_file<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    write_csv_rows(std::fs::File::create(path)?, rows)
}
