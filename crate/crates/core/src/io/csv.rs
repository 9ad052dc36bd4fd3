//! Force-displacement curves.

use std::fmt::Write;
use std::path::Path;

use super::{write_file, IoError};
use crate::solver::RunRecord;

pub const CSV_HEADER: &str = "increment,applied_mm,reaction_N,iterations,converged";

/// One row per recorded increment, values in shortest round-trip form.
pub fn force_displacement_csv(record: &RunRecord) -> Result<String, IoError> {
    if record.rows.is_empty() {
        return Err(IoError::EmptyRecord);
    }
    let mut out = String::with_capacity(48 * (record.rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &record.rows {
        let _ = writeln!(out, "{},{:?},{:?},{},{}", r.increment, r.applied, r.reaction, r.iterations, r.converged);
    }
    Ok(out)
}

pub fn write_force_displacement(record: &RunRecord, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_file(path.as_ref(), &force_displacement_csv(record)?)
}
