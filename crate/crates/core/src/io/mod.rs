//! Run configuration parsing and result files.

mod config;
mod csv;
mod vtk;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{parse_config, parse_config_str, BoxSet, ConfigError, ConfigErrors, MeshSource, MeshSpec, OutputSpec, RunConfig};
pub use csv::{force_displacement_csv, write_force_displacement, CSV_HEADER};
pub use vtk::{vtk_string, write_vtk};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{what}: expected {expected} values, found {found}")]
    SizeMismatch { what: &'static str, expected: usize, found: usize },
    #[error("run record is empty")]
    EmptyRecord,
}

pub(crate) fn write_file(path: &std::path::Path, text: &str) -> Result<(), IoError> {
    std::fs::write(path, text).map_err(|source| IoError::Io { path: path.to_owned(), source })
}
