use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

/// Provenance record emitted with every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    /// Every flag of the run, defaults included.
    pub config: serde_json::Value,
    pub version: String,
    pub wall_time_s: f64,
    /// SHA-256 of the compact JSON encoding of the report.
    pub digest: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub manifest: RunManifest,
    pub report: serde_json::Value,
}

impl Envelope {
    pub fn new(
        subcommand: &str,
        config: serde_json::Value,
        report: serde_json::Value,
        passed: bool,
        wall: Duration,
    ) -> Self {
        let digest = format!("{:x}", Sha256::digest(report.to_string().as_bytes()));
        Self {
            manifest: RunManifest {
                subcommand: subcommand.to_owned(),
                config,
                version: env!("CARGO_PKG_VERSION").to_owned(),
                wall_time_s: wall.as_secs_f64(),
                digest,
                passed,
            },
            report,
        }
    }
}

pub(crate) fn emit(envelope: &Envelope, out: Option<&Path>) -> Result<(), CliError> {
    let mut text =
        serde_json::to_string_pretty(envelope).map_err(|e| CliError::Usage(e.to_string()))?;
    text.push('\n');
    match out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

/// Writes to a temporary file next to `path`, then renames it into place.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_owned(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes)
        .and_then(|_| tmp.as_file().sync_all())
        .map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
