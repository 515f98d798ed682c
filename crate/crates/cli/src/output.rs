//! Atomic file output, the JSON envelope and CSV tables.

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: &str = "1.0";

/// Seconds since the epoch from `SOURCE_DATE_EPOCH`, or `None`.
///
/// Wall-clock time is never used so that repeated runs are byte-identical.
pub fn timestamp() -> Option<u64> {
    std::env::var("SOURCE_DATE_EPOCH").ok()?.trim().parse().ok()
}

#[derive(Debug, Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub schema_version: &'static str,
    pub timestamp: Option<u64>,
    pub config: &'a RunConfig,
    pub results: T,
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.flush().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

pub fn json_bytes<T: Serialize>(cfg: &RunConfig, results: T) -> Result<Vec<u8>> {
    let env = Envelope { schema_version: SCHEMA_VERSION, timestamp: timestamp(), config: cfg, results };
    let mut bytes = serde_json::to_vec_pretty(&env).map_err(|e| CliError::Serialize(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn write_json<T: Serialize>(cfg: &RunConfig, name: &str, results: T) -> Result<PathBuf> {
    let path = cfg.out.join(name);
    write_atomic(&path, &json_bytes(cfg, results)?)?;
    Ok(path)
}

/// Shortest decimal that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// A CSV table preceded by `#` lines carrying the schema version and the
/// config echo.
pub fn csv_bytes(cfg: &RunConfig, header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let echo = serde_json::to_string(cfg).map_err(|e| CliError::Serialize(e.to_string()))?;
    let mut buf = format!("# schema_version: {SCHEMA_VERSION}\n# config: {echo}\n").into_bytes();
    {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut buf);
        w.write_record(header).map_err(|e| CliError::Serialize(e.to_string()))?;
        for row in rows {
            w.write_record(row).map_err(|e| CliError::Serialize(e.to_string()))?;
        }
        w.flush().map_err(|e| CliError::Serialize(e.to_string()))?;
    }
    Ok(buf)
}

pub fn write_csv(cfg: &RunConfig, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<PathBuf> {
    let path = cfg.out.join(name);
    write_atomic(&path, &csv_bytes(cfg, header, rows)?)?;
    Ok(path)
}

pub fn write_text(cfg: &RunConfig, name: &str, text: &str) -> Result<PathBuf> {
    let path = cfg.out.join(name);
    write_atomic(&path, text.as_bytes())?;
    Ok(path)
}
