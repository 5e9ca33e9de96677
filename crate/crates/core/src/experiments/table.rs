use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Rectangular result set: one numeric cell per column and row, plus a free
/// text diagnostics entry per row. Missing values are `NaN`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub diagnostics: Vec<String>,
    /// Ordered `key: value` pairs written as leading comment lines.
    pub metadata: Vec<(String, String)>,
}

pub(crate) const TIMESTAMP_KEY: &str = "timestamp";
const DIAGNOSTICS: &str = "diagnostics";

impl SweepTable {
    pub fn new(columns: Vec<String>) -> Self {
        SweepTable {
            columns,
            rows: Vec::new(),
            diagnostics: Vec::new(),
            metadata: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>, diagnostics: String) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
        self.diagnostics.push(diagnostics);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn set_meta(&mut self, key: impl Into<String>, value: impl Into<String>) {
        let key = key.into();
        let value = value.into();
        match self.metadata.iter_mut().find(|(k, _)| *k == key) {
            Some(entry) => entry.1 = value,
            None => self.metadata.push((key, value)),
        }
    }

    /// Append the columns of `other` (same row count) under new names.
    pub fn join_columns(&mut self, other: &SweepTable, names: &[(&str, &str)]) -> Result<()> {
        if other.rows.len() != self.rows.len() {
            return Err(Error::invalid(
                "joined tables must have the same number of rows",
            ));
        }
        for &(from, to) in names {
            let k = other
                .column_index(from)
                .ok_or_else(|| Error::invalid(format!("no column '{from}' to join")))?;
            self.columns.push(to.to_owned());
            for (row, src) in self.rows.iter_mut().zip(&other.rows) {
                row.push(src[k]);
            }
        }
        for (d, o) in self.diagnostics.iter_mut().zip(&other.diagnostics) {
            if !o.is_empty() {
                if !d.is_empty() {
                    d.push_str("; ");
                }
                d.push_str(o);
            }
        }
        Ok(())
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_owned(),
        source,
    }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_owned(),
        source,
    }
}

/// Write `table` as UTF-8 CSV: `# key: value` comment lines, a header, and
/// numbers in shortest round-trip scientific notation.
pub fn write_csv(table: &SweepTable, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    for (k, v) in &table.metadata {
        // keep each entry on one comment line
        let v = v.replace(['\n', '\r'], " ");
        writeln!(out, "# {k}: {v}").map_err(io_err(path))?;
    }
    {
        let mut w = csv::Writer::from_writer(&mut out);
        let header = table
            .columns
            .iter()
            .map(String::as_str)
            .chain(std::iter::once(DIAGNOSTICS));
        w.write_record(header).map_err(csv_err(path))?;
        for (row, diag) in table.rows.iter().zip(&table.diagnostics) {
            let mut rec: Vec<String> = row.iter().map(|x| format!("{x:e}")).collect();
            rec.push(diag.clone());
            w.write_record(&rec).map_err(csv_err(path))?;
        }
        w.flush().map_err(io_err(path))?;
    }
    out.flush().map_err(io_err(path))?;
    Ok(())
}

/// Read a file produced by [`write_csv`].
pub fn read_csv(path: impl AsRef<Path>) -> Result<SweepTable> {
    let path = path.as_ref();
    let file = File::open(path).map_err(io_err(path))?;
    let mut metadata = Vec::new();
    let mut body = String::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(io_err(path))?;
        match line.strip_prefix("# ") {
            Some(meta) => {
                let (k, v) = meta.split_once(": ").unwrap_or((meta, ""));
                metadata.push((k.to_owned(), v.to_owned()));
            }
            None => {
                body.push_str(&line);
                body.push('\n');
            }
        }
    }
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let mut columns: Vec<String> = rdr
        .headers()
        .map_err(csv_err(path))?
        .iter()
        .map(str::to_owned)
        .collect();
    let has_diag = columns.last().is_some_and(|c| c == DIAGNOSTICS);
    if has_diag {
        columns.pop();
    }
    let mut table = SweepTable::new(columns);
    table.metadata = metadata;
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err(path))?;
        let n = table.columns.len();
        let row = (0..n)
            .map(|k| {
                rec.get(k)
                    .unwrap_or("")
                    .parse::<f64>()
                    .map_err(|e| Error::invalid(format!("{}: bad number: {e}", path.display())))
            })
            .collect::<Result<Vec<f64>>>()?;
        let diag = if has_diag {
            rec.get(n).unwrap_or("").to_owned()
        } else {
            String::new()
        };
        table.push_row(row, diag);
    }
    Ok(table)
}
