//! File access with path-qualified errors.

use std::fs;
use std::path::Path;

use matroidwb_core::constructions::{LatticePathPair, MultiGraph, SetSystem};
use matroidwb_core::format::{parse_graph, parse_lattice_paths, parse_matroid, parse_set_system};
use matroidwb_core::Matroid;

use crate::error::{CliError, CliResult};

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir.display().to_string(), e))?;
    }
    fs::write(path, text).map_err(|e| CliError::io(path.display().to_string(), e))
}

fn parsed<T>(path: &Path, parse: fn(&str) -> matroidwb_core::Result<T>) -> CliResult<T> {
    let text = read_text(path)?;
    parse(&text).map_err(|e| CliError::File {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

pub fn read_matroid(path: &Path) -> CliResult<Matroid> {
    parsed(path, parse_matroid)
}

pub fn read_graph(path: &Path) -> CliResult<MultiGraph> {
    parsed(path, parse_graph)
}

pub fn read_set_system(path: &Path) -> CliResult<SetSystem> {
    parsed(path, parse_set_system)
}

pub fn read_lattice_paths(path: &Path) -> CliResult<LatticePathPair> {
    parsed(path, parse_lattice_paths)
}

/// File stem used as the default matroid identifier.
pub fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}
