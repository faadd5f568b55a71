use std::fmt;
use std::io::{self, Write};

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i128),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(n) => write!(f, "{n}"),
            Cell::Float(x) => write!(f, "{x:.6}"),
            Cell::Bool(b) => write!(f, "{b}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Int(n) => i64::try_from(*n).map(Value::from).unwrap_or_else(|_| Value::String(n.to_string())),
            Cell::Float(x) => format!("{x:.6}").parse::<f64>().ok().and_then(serde_json::Number::from_f64).map_or(Value::Null, Value::Number),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

macro_rules! cell_from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(v: $t) -> Self {
                Cell::Int(v as i128)
            }
        }
    )*};
}
cell_from_int!(i8, i64, i128, u64, u32, usize);

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub config_digest: String,
    pub version: String,
    pub table: Table,
    pub summary: Option<Table>,
    pub notes: Vec<(String, String)>,
    pub assertions: Vec<Assertion>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

fn csv_record<W: Write>(out: &mut csv::Writer<W>, fields: impl IntoIterator<Item = String>) -> io::Result<()> {
    out.write_record(fields).map_err(io::Error::other)
}

fn write_tables<W: Write>(tables: &[&Table], out: W) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
    for t in tables {
        csv_record(&mut w, t.columns.iter().cloned())?;
        for row in &t.rows {
            csv_record(&mut w, row.iter().map(|c| c.to_string()))?;
        }
    }
    w.flush()
}

impl Report {
    fn tables(&self) -> Vec<&Table> {
        std::iter::once(&self.table).chain(self.summary.as_ref()).collect()
    }

    /// sha256 of the CSV rendering of the data tables alone.
    pub fn rows_digest(&self) -> String {
        let mut buf = Vec::new();
        write_tables(&self.tables(), &mut buf).expect("in-memory write");
        hex::encode(Sha256::digest(&buf))
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    /// 0 when every assertion holds, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            2
        }
    }
}

/// Writes the report. CSV carries metadata, notes and assertion outcomes as
/// `#` comment lines around the data tables.
pub fn emit_report(report: &Report, format: Format, dest: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(dest, "# command: {}", report.command)?;
            writeln!(dest, "# config_digest: {}", report.config_digest)?;
            writeln!(dest, "# version: {}", report.version)?;
            write_tables(&report.tables(), &mut *dest)?;
            for (k, v) in &report.notes {
                writeln!(dest, "# {k}: {v}")?;
            }
            for a in &report.assertions {
                writeln!(dest, "# assert {}: {}", a.name, if a.passed { "pass" } else { "fail" })?;
            }
        }
        Format::Jsonl => {
            let mut line = |v: Map<String, Value>| writeln!(dest, "{}", Value::Object(v));
            let mut header = Map::new();
            header.insert("type".into(), "header".into());
            header.insert("command".into(), report.command.clone().into());
            header.insert("config_digest".into(), report.config_digest.clone().into());
            header.insert("version".into(), report.version.clone().into());
            line(header)?;
            for (kind, table) in [("row", Some(&report.table)), ("summary", report.summary.as_ref())] {
                let Some(table) = table else { continue };
                for row in &table.rows {
                    let mut m = Map::new();
                    m.insert("type".into(), kind.into());
                    for (c, v) in table.columns.iter().zip(row) {
                        m.insert(c.clone(), v.to_json());
                    }
                    line(m)?;
                }
            }
            for (k, v) in &report.notes {
                let mut m = Map::new();
                m.insert("type".into(), "note".into());
                m.insert("key".into(), k.clone().into());
                m.insert("value".into(), v.clone().into());
                line(m)?;
            }
            for a in &report.assertions {
                let mut m = Map::new();
                m.insert("type".into(), "assertion".into());
                m.insert("name".into(), a.name.clone().into());
                m.insert("passed".into(), a.passed.into());
                line(m)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(rows: usize) -> Report {
        let mut table = Table::new(&["n1", "n2", "deg_gcd", "gcd"]);
        for n in 1..=rows {
            table.push(vec![n.into(), n.into(), 0u64.into(), "1".into()]);
        }
        Report {
            command: "gcd-table".into(),
            config_digest: "abc".into(),
            version: "0.1.0".into(),
            table,
            summary: None,
            notes: vec![("size_unit".into(), "degree".into())],
            assertions: vec![],
        }
    }

    #[test]
    fn empty_report_is_header_only() {
        let mut out = Vec::new();
        emit_report(&sample(0), Format::Csv, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data, vec!["n1,n2,deg_gcd,gcd"]);
        assert_eq!(sample(0).exit_code(), 0);
    }

    #[test]
    fn jsonl_keeps_column_order() {
        let mut out = Vec::new();
        emit_report(&sample(1), Format::Jsonl, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let row = text.lines().nth(1).unwrap();
        assert_eq!(row, r#"{"type":"row","n1":1,"n2":1,"deg_gcd":0,"gcd":"1"}"#);
    }

    #[test]
    fn digest_tracks_rows_only() {
        let mut a = sample(2);
        let b = sample(2);
        a.notes.clear();
        assert_eq!(a.rows_digest(), b.rows_digest());
        assert_ne!(a.rows_digest(), sample(3).rows_digest());
    }
}
