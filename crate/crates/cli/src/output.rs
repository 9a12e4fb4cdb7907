//! Output staging. Every file a command produces is collected in memory and
//! committed together through temp files and renames, so a failed command
//! leaves nothing behind.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use tempfile::NamedTempFile;

#[derive(Debug, Default)]
pub struct Outputs {
    files: Vec<(PathBuf, String)>,
    stdout: String,
}

impl Outputs {
    pub fn file(&mut self, path: &Path, contents: String) {
        self.files.push((path.to_path_buf(), contents));
    }

    pub fn stdout(&mut self, text: String) {
        self.stdout.push_str(&text);
    }

    /// Writes every staged file, then renames them into place.
    pub fn commit(self) -> Result<String> {
        let mut staged = Vec::with_capacity(self.files.len());
        for (path, contents) in &self.files {
            let mut tmp = NamedTempFile::new_in(parent_dir(path))
                .with_context(|| format!("cannot create a temp file next to {}", path.display()))?;
            tmp.write_all(contents.as_bytes())
                .and_then(|_| tmp.flush())
                .with_context(|| format!("cannot write {}", path.display()))?;
            staged.push((tmp, path));
        }
        for (tmp, path) in staged {
            tmp.persist(path)
                .with_context(|| format!("cannot move output into {}", path.display()))?;
        }
        Ok(self.stdout)
    }
}

fn parent_dir(path: &Path) -> &Path {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    }
}

/// Checks output paths up front: parent directories exist, no path is a
/// directory and no path is named twice.
pub fn check_outputs(paths: &[&Path]) -> Result<()> {
    for (i, p) in paths.iter().enumerate() {
        if !parent_dir(p).is_dir() {
            bail!("output directory of {} does not exist", p.display());
        }
        if p.is_dir() {
            bail!("output path {} is a directory", p.display());
        }
        if paths[..i].contains(p) {
            bail!("output path {} is given twice", p.display());
        }
    }
    Ok(())
}

pub fn read_input(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}
