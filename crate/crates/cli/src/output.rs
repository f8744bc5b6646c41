//! Output files: CSV bodies prefixed by the config hash, JSON sidecars with
//! the hash and a timestamp.

use crate::error::CliError;
use serde::Serialize;
use serde_json::{json, Value};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

pub const WATERMARK: &str = "# WARNING: gates overridden; assumptions of the long-time asymptotics not verified";

pub struct Sink {
    pub dir: PathBuf,
    pub sha256: String,
    pub overridden: bool,
}

impl Sink {
    pub fn new(dir: PathBuf, sha256: String, overridden: bool) -> Result<Self, CliError> {
        fs::create_dir_all(&dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
        Ok(Sink { dir, sha256, overridden })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// Writes `# config_sha256=...`, the watermark if gates were overridden,
    /// then the body produced by `body`.
    pub fn csv(&self, name: &str, body: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Result<PathBuf, CliError> {
        let mut buf = format!("# config_sha256={}\n", self.sha256).into_bytes();
        if self.overridden {
            buf.extend_from_slice(WATERMARK.as_bytes());
            buf.push(b'\n');
        }
        body(&mut buf)?;
        write(&self.path(name), &buf)
    }

    /// Writes `{config_sha256, gates_overridden, created_unix, <payload>}`.
    pub fn json(&self, name: &str, payload: &impl Serialize) -> Result<PathBuf, CliError> {
        let payload = serde_json::to_value(payload).map_err(CliError::numerical)?;
        let mut v = json!({
            "config_sha256": self.sha256,
            "gates_overridden": self.overridden,
            "created_unix": SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        });
        if let (Value::Object(m), Value::Object(p)) = (&mut v, payload) {
            m.extend(p);
        }
        let text = serde_json::to_string_pretty(&v).map_err(CliError::numerical)?;
        write(&self.path(name), text.as_bytes())
    }
}

fn write(path: &Path, bytes: &[u8]) -> Result<PathBuf, CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(path.to_path_buf())
}
