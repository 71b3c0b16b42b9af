//! Ordered output records shared by the CSV and JSON writers, so both
//! formats carry the same values field for field.

use std::io::Write;

use serde::ser::{Serialize, SerializeMap, Serializer};
use serde_json::value::RawValue;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// Preformatted number.
    Num(String),
    Text(String),
    Bool(bool),
    Null,
}

impl Cell {
    pub fn int(v: impl ToString) -> Cell {
        Cell::Num(v.to_string())
    }

    /// Coordinates: three decimals.
    pub fn coord(v: f64) -> Cell {
        Cell::Num(format!("{v:.3}"))
    }

    pub fn real(v: f64) -> Cell {
        Cell::Num(format!("{v:.6}"))
    }

    fn csv_text(&self) -> String {
        match self {
            Cell::Num(s) | Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record {
    pub fields: Vec<(&'static str, Cell)>,
}

impl Record {
    pub fn push(&mut self, name: &'static str, cell: Cell) -> &mut Self {
        self.fields.push((name, cell));
        self
    }

    pub fn header(&self) -> Vec<&'static str> {
        self.fields.iter().map(|(k, _)| *k).collect()
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        serde_json::to_string(self).map_err(|e| CliError::Output(e.to_string()))
    }
}

impl Serialize for Record {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.fields.len()))?;
        for (key, cell) in &self.fields {
            match cell {
                Cell::Num(s) => {
                    let raw = RawValue::from_string(s.clone()).map_err(serde::ser::Error::custom)?;
                    map.serialize_entry(key, &raw)?
                }
                Cell::Text(s) => map.serialize_entry(key, s)?,
                Cell::Bool(b) => map.serialize_entry(key, b)?,
                Cell::Null => map.serialize_entry(key, &())?,
            }
        }
        map.end()
    }
}

/// Writes records as CSV with the first record's field names as header.
pub fn write_csv<W: Write>(out: W, records: &[Record]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| CliError::Output(e.to_string());
    if let Some(first) = records.first() {
        w.write_record(first.header()).map_err(io)?;
    }
    for r in records {
        w.write_record(r.fields.iter().map(|(_, c)| c.csv_text())).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Output(e.to_string()))
}
