//! Tabular sweep results and their CSV form: `#`-prefixed metadata lines,
//! then a header row, then one row per record. Floats use Rust's shortest
//! round-trip formatting; an undefined value is an empty field.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub columns: Vec<Column>,
    /// Metadata lines without the leading `# `.
    pub metadata: Vec<String>,
}

impl SweepResult {
    pub fn new(names: &[&str], metadata: Vec<String>) -> Self {
        Self {
            columns: names
                .iter()
                .map(|n| Column {
                    name: n.to_string(),
                    values: Vec::new(),
                })
                .collect(),
            metadata,
        }
    }

    pub fn push_row(&mut self, row: &[Option<f64>]) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::invalid(format!(
                "row has {} fields, table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        for (c, &v) in self.columns.iter_mut().zip(row) {
            c.values.push(v);
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn column(&self, name: &str) -> Option<&[Option<f64>]> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    pub fn header(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.name.as_str()).collect()
    }

    /// Rows as vectors, in insertion order.
    pub fn rows(&self) -> impl Iterator<Item = Vec<Option<f64>>> + '_ {
        (0..self.len()).map(|i| self.columns.iter().map(|c| c.values[i]).collect())
    }

    /// Metadata value for `key` from a `key=value` line.
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find_map(|line| {
            line.split_whitespace()
                .find_map(|kv| kv.strip_prefix(key).and_then(|rest| rest.strip_prefix('=')))
        })
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        for line in &self.metadata {
            writeln!(out, "# {line}")?;
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(self.header())?;
        for row in self.rows() {
            w.write_record(row.iter().map(|v| v.map(|x| x.to_string()).unwrap_or_default()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut metadata = Vec::new();
        let mut body = String::new();
        for line in input.lines() {
            let line = line?;
            match line.strip_prefix('#') {
                Some(m) if body.is_empty() => metadata.push(m.strip_prefix(' ').unwrap_or(m).to_string()),
                _ => {
                    body.push_str(&line);
                    body.push('\n');
                }
            }
        }
        let mut r = csv::ReaderBuilder::new().from_reader(body.as_bytes());
        let names: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let mut result = SweepResult {
            columns: names
                .into_iter()
                .map(|name| Column { name, values: Vec::new() })
                .collect(),
            metadata,
        };
        for record in r.records() {
            let record = record?;
            let row = record
                .iter()
                .map(|f| {
                    if f.is_empty() {
                        Ok(None)
                    } else {
                        f.parse::<f64>()
                            .map(Some)
                            .map_err(|_| Error::Io(format!("bad numeric field '{f}'")))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            result.push_row(&row)?;
        }
        Ok(result)
    }
}
