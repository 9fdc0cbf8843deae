//! Deterministic number formatting for JSON and CSV exports.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::error::CliError;

pub const SCHEMA: &str = "halfelastica/1";

/// Formats a float with 17 significant digits; non-finite values become `NaN`/`inf`.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Compact JSON formatter writing every float with 17 significant digits.
struct Sig17;

impl Formatter for Sig17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17);
    value
        .serialize(&mut ser)
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| CliError::Numeric(e.to_string()))
}

/// A CSV table held in memory until the command succeeds.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Result<Self, CliError> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header).map_err(csv_error)?;
        Ok(Table { writer })
    }

    pub fn row(&mut self, cells: &[Cell]) -> Result<(), CliError> {
        let record = cells.iter().map(Cell::render);
        self.writer.write_record(record).map_err(csv_error)
    }

    pub fn finish(self) -> Result<String, CliError> {
        let bytes = self
            .writer
            .into_inner()
            .map_err(|e| CliError::Numeric(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Numeric(e.to_string()))
    }
}

pub enum Cell<'a> {
    Num(f64),
    Text(&'a str),
}

impl Cell<'_> {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt17(*x),
            Cell::Text(s) => s.to_string(),
        }
    }
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Numeric(format!("csv: {e}"))
}
