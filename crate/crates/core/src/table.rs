//! Tabular results written as CSV with a `#` provenance header.

use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) if x.is_nan() => "nan".to_string(),
            // 12 significant digits: stable across runs, readable in diffs
            Cell::Real(x) => format!("{x:.11e}"),
            Cell::Text(t) => t.clone(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Int(i) => Some(i as f64),
            Cell::Real(x) => Some(x),
            Cell::Text(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<i32> for Cell {
    fn from(x: i32) -> Self {
        Cell::Int(x.into())
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(x.into())
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub name: String,
    /// Unit label; `1` for dimensionless.
    pub unit: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultTable {
    pub title: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra `key = value` provenance lines.
    pub notes: Vec<(String, String)>,
}

/// SHA-256 of the configuration echo, hex encoded.
pub fn config_hash(echo: &str) -> String {
    let digest = Sha256::digest(echo.as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

impl ResultTable {
    pub fn new(title: &str, columns: &[(&str, &str)]) -> Self {
        Self {
            title: title.to_string(),
            columns: columns
                .iter()
                .map(|&(n, u)| Column {
                    name: n.to_string(),
                    unit: u.to_string(),
                })
                .collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::LengthMismatch {
                expected: self.columns.len(),
                got: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.push((key.to_string(), value.to_string()));
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Numeric column by name.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        self.rows.iter().map(|r| r[i].as_f64()).collect()
    }

    /// CSV text: provenance comments (including the full configuration echo),
    /// a `name [unit]` header, then the rows.
    pub fn to_csv(&self, config_echo: &str) -> Result<String> {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.title);
        let _ = writeln!(out, "# generator = pa-spectra {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "# config_sha256 = {}", config_hash(config_echo));
        for (k, v) in &self.notes {
            let _ = writeln!(out, "# {k} = {v}");
        }
        for line in config_echo.lines() {
            let _ = writeln!(out, "# config: {line}");
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.columns.iter().map(|c| format!("{} [{}]", c.name, c.unit)))?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        let body = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        out.push_str(&String::from_utf8(body).expect("csv output is utf-8"));
        Ok(out)
    }

    pub fn write_csv(&self, path: &Path, config_echo: &str) -> Result<()> {
        std::fs::write(path, self.to_csv(config_echo)?)?;
        Ok(())
    }

    /// Whitespace-separated two-column file for plotting.
    pub fn to_plot(&self, x: &str, y: &str) -> Result<String> {
        let (xi, yi) = match (self.column_index(x), self.column_index(y)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::invalid(format!("no columns '{x}' and '{y}' in {}", self.title))),
        };
        let cx = &self.columns[xi];
        let cy = &self.columns[yi];
        let mut out = format!("# {} [{}]  {} [{}]\n", cx.name, cx.unit, cy.name, cy.unit);
        for r in &self.rows {
            let _ = writeln!(out, "{} {}", r[xi].render(), r[yi].render());
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResultTable {
        let mut t = ResultTable::new("levels", &[("v", "1"), ("eps_over_h", "kHz"), ("tag", "1")]);
        t.push(vec![33.into(), 1460.0.into(), "ok".into()]).unwrap();
        t.push(vec![34.into(), f64::NAN.into(), "regime".into()]).unwrap();
        t.note("r_in_nm", 3.7);
        t
    }

    #[test]
    fn csv_layout() {
        let text = sample().to_csv("species.name = Na\n").unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# levels");
        assert!(lines[1].starts_with("# generator = pa-spectra "));
        assert_eq!(lines[2].len(), "# config_sha256 = ".len() + 64);
        assert_eq!(lines[3], "# r_in_nm = 3.7");
        assert_eq!(lines[4], "# config: species.name = Na");
        assert_eq!(lines[5], "v [1],eps_over_h [kHz],tag [1]");
        assert_eq!(lines[6], "33,1.46000000000e3,ok");
        assert_eq!(lines[7], "34,nan,regime");
    }

    #[test]
    fn hash_is_sha256() {
        assert_eq!(
            config_hash(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
        assert_ne!(config_hash("a"), config_hash("b"));
    }

    #[test]
    fn row_width_checked() {
        let mut t = sample();
        assert!(t.push(vec![1.into()]).is_err());
    }

    #[test]
    fn columns_and_plot() {
        let t = sample();
        assert_eq!(t.column("v").unwrap(), vec![33.0, 34.0]);
        assert!(t.column("tag").is_none());
        let plot = t.to_plot("v", "eps_over_h").unwrap();
        assert_eq!(plot.lines().nth(1), Some("33 1.46000000000e3"));
        assert!(t.to_plot("v", "missing").is_err());
    }
}
