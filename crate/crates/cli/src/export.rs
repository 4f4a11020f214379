//! Writing an envelope to disk.

use std::fs;
use std::path::{Path, PathBuf};

use crate::{CliError, ResultEnvelope};

pub const ENVELOPE_FILE: &str = "envelope.json";

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::runtime(format!("{}: {e}", path.display()))
}

/// Writes `envelope.json` and every CSV into `target`. Files are staged
/// under temporary names and renamed once all writes succeed.
pub fn export_plotdata(envelope: &ResultEnvelope, target: &Path) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(target).map_err(|e| io_err(target, e))?;
    let mut contents = vec![(ENVELOPE_FILE.to_string(), envelope.to_json()?)];
    contents.extend(envelope.files.iter().map(|(k, v)| (k.clone(), v.clone())));
    let mut staged = Vec::with_capacity(contents.len());
    for (name, text) in &contents {
        let tmp = target.join(format!(".{name}.partial"));
        if let Err(e) = fs::write(&tmp, text.as_bytes()) {
            for (t, _) in &staged {
                let _ = fs::remove_file(t);
            }
            return Err(io_err(&tmp, e));
        }
        staged.push((tmp, target.join(name)));
    }
    let mut written = Vec::with_capacity(staged.len());
    for (tmp, dest) in staged {
        fs::rename(&tmp, &dest).map_err(|e| io_err(&dest, e))?;
        written.push(dest);
    }
    Ok(written)
}
