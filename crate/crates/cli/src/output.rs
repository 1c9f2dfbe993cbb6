use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::Format;
use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Embedded in JSON results. Holds only what determines the numbers, so the
/// bytes do not depend on wall clock or worker count.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub command: &'static str,
    pub params: Value,
    pub seed: u64,
    pub version: &'static str,
}

/// Written to `<out>.manifest.json` next to every result file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub params: Value,
    pub seed: u64,
    pub version: String,
    pub format: String,
    pub workers: usize,
    pub started: String,
    pub finished: String,
    pub outputs: Vec<PathBuf>,
    /// The original command line.
    pub argv: Vec<String>,
    /// Arguments that reproduce the run (the seed made explicit).
    pub replay_args: Vec<String>,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read manifest {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Invalid(format!("malformed manifest {}: {e}", path.display())))
    }
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

#[derive(Serialize)]
struct Document<'a, T> {
    manifest: &'a Provenance,
    rows: &'a [T],
    #[serde(skip_serializing_if = "Option::is_none")]
    details: Option<&'a Value>,
}

/// Serializes result rows. CSV carries the rows only; JSON wraps them with provenance.
pub fn render<T: Serialize>(
    format: Format,
    provenance: &Provenance,
    rows: &[T],
    details: Option<&Value>,
) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.serialize(row).map_err(|e| CliError::Io(format!("csv encoding: {e}")))?;
            }
            w.into_inner().map_err(|e| CliError::Io(format!("csv encoding: {e}")))
        }
        Format::Json => {
            let doc = Document {
                manifest: provenance,
                rows,
                details,
            };
            let mut bytes = serde_json::to_vec_pretty(&doc).map_err(|e| CliError::Io(format!("json encoding: {e}")))?;
            bytes.push(b'\n');
            Ok(bytes)
        }
    }
}

pub fn create(path: &Path) -> Result<File, CliError> {
    File::create(path).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

pub fn write_all(file: &mut impl Write, bytes: &[u8], path: &Path) -> Result<(), CliError> {
    file.write_all(bytes)
        .and_then(|_| file.flush())
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}
