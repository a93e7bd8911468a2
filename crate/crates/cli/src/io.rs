use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use ssac_core::instance::{read_clustering, read_instance};
use ssac_core::{Clustering, EdgeLabeling};

use crate::error::usage;

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

pub fn load_instance(path: &Path) -> Result<EdgeLabeling> {
    let file = fs::File::open(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(read_instance(BufReader::new(file)).with_context(|| format!("reading instance {}", path.display()))?)
}

pub fn load_clustering(path: &Path) -> Result<Clustering> {
    let file = fs::File::open(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(read_clustering(BufReader::new(file)).with_context(|| format!("reading clustering {}", path.display()))?)
}

pub fn write(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

/// Prints `text` unless quiet, and also writes it to `out` when given.
pub fn emit(text: &str, out: Option<&PathBuf>, quiet: bool) -> Result<()> {
    if let Some(path) = out {
        write(path, text.as_bytes())?;
    }
    if !quiet {
        print!("{text}");
    }
    Ok(())
}

pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialise") + "\n"
}
