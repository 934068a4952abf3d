use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use qiso::{Error, Result};
use serde::Serialize;

use crate::args::Format;

/// Buffers everything and writes once, to a file or stdout.
pub struct Output {
    target: Option<PathBuf>,
    buf: Vec<u8>,
}

impl Output {
    pub fn stdout() -> Self {
        Self { target: None, buf: Vec::new() }
    }

    pub fn file(path: &Path) -> Self {
        Self { target: Some(path.to_path_buf()), buf: Vec::new() }
    }

    pub fn json_line<T: Serialize>(&mut self, value: &T) -> Result<()> {
        serde_json::to_writer(&mut self.buf, value)?;
        self.buf.push(b'\n');
        Ok(())
    }

    pub fn pretty<T: Serialize>(&mut self, value: &T) -> Result<()> {
        serde_json::to_writer_pretty(&mut self.buf, value)?;
        self.buf.push(b'\n');
        Ok(())
    }

    pub fn csv<T: Serialize>(&mut self, rows: &[T]) -> Result<()> {
        let mut w = csv::Writer::from_writer(&mut self.buf);
        for r in rows {
            w.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    /// One JSON object per row, or a CSV table.
    pub fn record<T: Serialize>(&mut self, format: Format, rows: &[T]) -> Result<()> {
        match format {
            Format::Json => rows.iter().try_for_each(|r| self.json_line(r)),
            Format::Csv => self.csv(rows),
        }
    }

    pub fn finish(self) -> Result<()> {
        match self.target {
            Some(p) => fs::write(p, &self.buf)?,
            None => io::stdout().write_all(&self.buf)?,
        }
        Ok(())
    }
}
