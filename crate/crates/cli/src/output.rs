//! CSV and JSON writers with a metadata header.

use crate::CliError;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

/// Line prefix of the only header line that varies between identical runs.
pub const TIMESTAMP_PREFIX: &str = "# generated_unix";

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub command: String,
    pub config_sha256: String,
    pub seed: u64,
    pub version: String,
}

impl Meta {
    pub fn new(command: &str, config_sha256: &str, seed: u64) -> Self {
        Self {
            command: command.to_string(),
            config_sha256: config_sha256.to_string(),
            seed,
            version: format!("pseudogap-lab {}", env!("CARGO_PKG_VERSION")),
        }
    }

    fn header(&self) -> String {
        let now = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        format!(
            "# {}\n# command {}\n# config_sha256 {}\n# seed {}\n{TIMESTAMP_PREFIX} {now}\n",
            self.version, self.command, self.config_sha256, self.seed
        )
    }
}

/// Writes `out/name` with the metadata header, a column row and the data.
pub fn write_csv(
    out: &Path,
    name: &str,
    meta: &Meta,
    columns: &[&str],
    rows: &[Vec<String>],
) -> Result<PathBuf, CliError> {
    let mut w = csv::Writer::from_writer(meta.header().into_bytes());
    w.write_record(columns).map_err(io_err)?;
    for r in rows {
        w.write_record(r).map_err(io_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    let path = out.join(name);
    std::fs::write(&path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

/// Writes `out/name` as pretty JSON `{"meta": …, "result": …}`.
pub fn write_json<T: Serialize>(
    out: &Path,
    name: &str,
    meta: &Meta,
    result: &T,
) -> Result<PathBuf, CliError> {
    #[derive(Serialize)]
    struct Doc<'a, T> {
        meta: &'a Meta,
        result: &'a T,
    }
    let text = serde_json::to_string_pretty(&Doc { meta, result })
        .map_err(|e| CliError::Io(e.to_string()))?;
    let path = out.join(name);
    std::fs::write(&path, text + "\n")
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

/// The data part of a CSV produced by [`write_csv`]: everything except
/// `#` lines.
pub fn data_rows(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

/// Shortest round-trip representation.
pub fn num(x: f64) -> String {
    format!("{x}")
}

fn io_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}
