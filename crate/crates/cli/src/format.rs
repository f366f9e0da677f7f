//! CSV helpers. Floats are written with 17 significant digits so every value
//! parses back to the identical `f64`.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::CliError;

pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Accumulates rows of a CSV table in memory, then writes them in one go.
pub struct Table {
    header: &'static [&'static str],
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &'static [&'static str]) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(path)
            .map_err(|e| CliError::io(path, e))?;
        w.write_record(self.header).map_err(|e| CliError::io(path, e))?;
        for row in &self.rows {
            w.write_record(row).map_err(|e| CliError::io(path, e))?;
        }
        w.flush().map_err(|e| CliError::io(path, e))
    }
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn write_text(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// A written output and the schema it follows.
#[derive(Debug, Clone, serde::Serialize)]
pub struct OutputFile {
    pub path: PathBuf,
    pub schema: String,
}

impl OutputFile {
    pub fn new(path: PathBuf, schema: &str) -> Self {
        OutputFile { path, schema: schema.to_string() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5, 0.0] {
            let s = float(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(float(0.001), "1.0000000000000000e-3");
    }
}
