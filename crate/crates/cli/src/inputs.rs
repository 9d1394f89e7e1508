//! File discovery and output helpers shared by the commands.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use discodep::Diagnostic;

/// `path` itself if it is a file, otherwise the files directly inside it
/// whose extension is one of `extensions`, sorted by name.
pub fn discover(path: &Path, extensions: &[&str]) -> Result<Vec<PathBuf>> {
    if path.is_file() {
        return Ok(vec![path.to_path_buf()]);
    }
    if !path.is_dir() {
        bail!("{}: no such file or directory", path.display());
    }
    let mut files = Vec::new();
    for entry in fs::read_dir(path).with_context(|| format!("reading {}", path.display()))? {
        let file = entry?.path();
        let matches = file
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| extensions.iter().any(|x| x.eq_ignore_ascii_case(e)));
        if matches && file.is_file() {
            files.push(file);
        }
    }
    if files.is_empty() {
        bail!(
            "{}: no files with extension {}",
            path.display(),
            extensions.join(", ")
        );
    }
    files.sort();
    Ok(files)
}

/// Document id of a file: its name without the extension.
pub fn doc_id_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

/// Write to `out`, or to standard output when no path is given.
pub fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => write_file(path, bytes),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// Tab-separated report, one finding per line:
/// `doc_id  line  kind  message`, with `-` when there is no line.
pub fn diagnostics_report(findings: &[(String, Vec<Diagnostic>)]) -> String {
    let mut out = String::new();
    for (doc_id, diagnostics) in findings {
        for d in diagnostics {
            let line = d.line.map(|l| l.to_string()).unwrap_or_else(|| "-".into());
            let _ = writeln!(out, "{}\t{}\t{:?}\t{}", doc_id, line, d.kind, d.message);
        }
    }
    out
}

/// Log every finding at a level matching its severity.
pub fn log_findings(findings: &[(String, Vec<Diagnostic>)]) {
    for (doc_id, diagnostics) in findings {
        for d in diagnostics {
            if d.kind.is_error() {
                log::warn!("{}: {:?}: {}", doc_id, d.kind, d);
            } else {
                log::info!("{}: {:?}: {}", doc_id, d.kind, d);
            }
        }
    }
}
