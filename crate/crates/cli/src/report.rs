use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use crate::Failure;

/// Common header of every JSON report.
#[derive(Serialize)]
pub struct Envelope {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    seed: u64,
    units: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
    result: Value,
}

impl Envelope {
    pub fn new(command: &'static str, seed: u64, timestamp: bool) -> Self {
        let timestamp = timestamp.then(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs())
        });
        Self {
            tool: "riskcomm",
            version: riskcomm_core::VERSION,
            command,
            seed,
            units: "bits",
            timestamp,
            result: Value::Null,
        }
    }

    pub fn write(mut self, path: &Path, result: Value) -> Result<(), Failure> {
        self.result = result;
        let mut text = serde_json::to_vec_pretty(&self).map_err(|e| Failure::Domain(e.to_string()))?;
        text.push(b'\n');
        write_atomic(path, &text)
    }
}

/// Writes to a sibling temp file, then renames over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let fail = |e: std::io::Error| Failure::Domain(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(bytes).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}
