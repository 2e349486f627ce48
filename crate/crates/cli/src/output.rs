use std::io::Write;
use std::path::Path;

use crate::CliError;

/// Full double precision, scientific notation.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Missing values become empty fields.
pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).map_err(io_error)?;
        for row in &self.rows {
            w.write_record(row).map_err(io_error)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn write_to(&self, path: Option<&Path>) -> Result<(), CliError> {
        let bytes = self.to_bytes()?;
        match path {
            Some(p) => std::fs::write(p, bytes)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
            None => std::io::stdout()
                .lock()
                .write_all(&bytes)
                .map_err(|e| CliError::Io(e.to_string())),
        }
    }
}

fn io_error(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}
