//! Report emission in three layouts: aligned text tables, CSV and
//! `key: value` lines.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Csv,
    KeyValue,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "keyvalue" => Ok(Format::KeyValue),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?}"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Table => "table",
            Format::Csv => "csv",
            Format::KeyValue => "keyvalue",
        })
    }
}

/// Rows under fixed column names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<I, S>(columns: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<I, S>(&mut self, row: I)
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        let row: Vec<String> = row.into_iter().map(|c| c.to_string()).collect();
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }
}

/// Ordered `key: value` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Record {
    pub entries: Vec<(String, String)>,
}

impl Record {
    pub fn new() -> Self {
        Record::default()
    }

    pub fn add(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Section {
    Record(Record),
    Table(Table),
}

/// A report made of sections, rendered one after another.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    pub sections: Vec<Section>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn record(&mut self, record: Record) -> &mut Self {
        self.sections.push(Section::Record(record));
        self
    }

    pub fn table(&mut self, table: Table) -> &mut Self {
        self.sections.push(Section::Table(table));
        self
    }

    pub fn render(&self, format: Format) -> String {
        let parts: Vec<String> = self
            .sections
            .iter()
            .map(|s| match (s, format) {
                (Section::Record(r), Format::Csv) => csv_of(
                    r.entries.iter().map(|(k, _)| k.as_str()),
                    std::iter::once(r.entries.iter().map(|(_, v)| v.as_str()).collect()),
                ),
                (Section::Record(r), _) => keyvalue(r.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))),
                (Section::Table(t), Format::Table) => aligned(t),
                (Section::Table(t), Format::Csv) => csv_of(
                    t.columns.iter().map(String::as_str),
                    t.rows.iter().map(|r| r.iter().map(String::as_str).collect()),
                ),
                (Section::Table(t), Format::KeyValue) => t
                    .rows
                    .iter()
                    .map(|row| keyvalue(t.columns.iter().map(String::as_str).zip(row.iter().map(String::as_str))))
                    .collect::<Vec<_>>()
                    .join("\n"),
            })
            .collect();
        parts.join("\n")
    }
}

fn keyvalue<'a>(pairs: impl Iterator<Item = (&'a str, &'a str)>) -> String {
    pairs.map(|(k, v)| format!("{k}: {v}\n")).collect()
}

fn csv_of<'a>(header: impl Iterator<Item = &'a str>, rows: impl Iterator<Item = Vec<&'a str>>) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for row in rows {
        w.write_record(row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is utf-8")
}

fn aligned(t: &Table) -> String {
    let mut widths: Vec<usize> = t.columns.iter().map(|c| c.chars().count()).collect();
    for row in &t.rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    let mut out = line(&t.columns);
    for row in &t.rows {
        out.push_str(&line(row));
    }
    out
}
