//! Numeric CSV tables: header row, comma separated, `.` decimal point,
//! 17 significant digits, Unix newlines.

use std::io::{Read, Write};

use crate::dynamics::{Trajectory, TRAJECTORY_COLUMNS};
use crate::error::{Error, Result};

/// Column-major numeric table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        let columns = vec![Vec::new(); header.len()];
        Self { header, columns }
    }

    pub fn from_columns(names: &[&str], columns: Vec<Vec<f64>>) -> Self {
        assert_eq!(names.len(), columns.len());
        Self {
            header: names.iter().map(|s| s.to_string()).collect(),
            columns,
        }
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn column(&self, name: &str) -> Result<&[f64]> {
        self.header
            .iter()
            .position(|h| h == name)
            .map(|i| self.columns[i].as_slice())
            .ok_or_else(|| {
                Error::config(
                    "column",
                    format!("no column '{name}'; available columns: {}", self.header.join(", ")),
                )
            })
    }

    pub fn push_row(&mut self, row: &[f64]) {
        assert_eq!(row.len(), self.columns.len());
        for (c, v) in self.columns.iter_mut().zip(row) {
            c.push(*v);
        }
    }

    pub fn write<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut out = std::io::BufWriter::new(out);
        writeln!(out, "{}", self.header.join(","))?;
        let mut line = String::new();
        for i in 0..self.rows() {
            line.clear();
            for (j, c) in self.columns.iter().enumerate() {
                if j > 0 {
                    line.push(',');
                }
                line.push_str(&format_value(c[i]));
            }
            line.push('\n');
            out.write_all(line.as_bytes())?;
        }
        out.flush()
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn read<R: Read>(input: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
        let header: Vec<String> = reader
            .headers()
            .map_err(|e| Error::config("csv", e.to_string()))?
            .iter()
            .map(|h| h.trim().to_string())
            .collect();
        if header.is_empty() || header.iter().all(String::is_empty) {
            return Err(Error::config("csv", "missing header row"));
        }
        let mut table = Table::new(header);
        let mut row = Vec::with_capacity(table.header.len());
        for (i, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| Error::config("csv", e.to_string()))?;
            row.clear();
            for (j, field) in rec.iter().enumerate() {
                let v = field.trim().parse::<f64>().map_err(|_| {
                    Error::config(
                        "csv",
                        format!("row {}, column '{}': '{field}' is not a number", i + 1, table.header[j]),
                    )
                })?;
                row.push(v);
            }
            table.push_row(&row);
        }
        Ok(table)
    }
}

/// 17 significant digits in scientific notation; round-trips every `f64`.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn trajectory_table(traj: &Trajectory) -> Table {
    let mut table = Table::new(TRAJECTORY_COLUMNS.iter().map(|s| s.to_string()).collect());
    for rec in &traj.records {
        table.push_row(&rec.values());
    }
    table
}
