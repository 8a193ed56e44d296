//! Input loading and output writing helpers.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use qbattery::schema::{DenseStateFile, LoadedState, StateFile, XStateFile};
use qbattery::{BatteryHamiltonian, Error};

use crate::CliError;

/// Reads and validates a state file. I/O and JSON shape problems are parse
/// errors (exit 2); a well-formed file describing an unphysical state is an
/// invalid-state error (exit 3). The schema is picked by the presence of a
/// `diag` or `dense` field so that shape errors name the offending field.
pub fn load_state(path: &Path) -> Result<LoadedState, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;

    let file = if value.get("diag").is_some() {
        StateFile::X(
            XStateFile::deserialize(&value)
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?,
        )
    } else if value.get("dense").is_some() {
        StateFile::Dense(
            DenseStateFile::deserialize(&value)
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?,
        )
    } else {
        return Err(CliError::Parse(format!(
            "{}: state file needs a `diag` or `dense` field",
            path.display()
        )));
    };
    file.to_state()
        .map_err(|e| CliError::InvalidState(format!("{}: {e}", path.display())))
}

/// Builds the Hamiltonian from the flags, falling back to the standard
/// energy assignment for the state's qubit count.
pub fn resolve_hamiltonian(
    n: usize,
    eps: Option<Vec<f64>>,
    gamma: f64,
) -> Result<BatteryHamiltonian, CliError> {
    let eps = eps.unwrap_or_else(|| BatteryHamiltonian::default_energies(n));
    if eps.len() != n {
        return Err(CliError::BadConfig(format!(
            "--eps lists {} energies but the state has {} qubits",
            eps.len(),
            n
        )));
    }
    BatteryHamiltonian::new(eps, gamma).map_err(cfg_error)
}

pub fn cfg_error(e: Error) -> CliError {
    CliError::BadConfig(e.to_string())
}

/// Parses a `lo:hi:points` grid specification into inclusive linspace
/// points. Zero points yields an empty grid, which commands reject.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, points] = parts.as_slice() else {
        return Err(CliError::BadConfig(format!(
            "grid must be lo:hi:points, got {spec}"
        )));
    };
    let lo: f64 = lo
        .parse()
        .map_err(|_| CliError::BadConfig(format!("bad grid start: {lo}")))?;
    let hi: f64 = hi
        .parse()
        .map_err(|_| CliError::BadConfig(format!("bad grid end: {hi}")))?;
    let points: usize = points
        .parse()
        .map_err(|_| CliError::BadConfig(format!("bad grid point count: {points}")))?;
    if points == 0 {
        return Ok(Vec::new());
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / (points - 1) as f64;
    Ok((0..points).map(|k| lo + step * k as f64).collect())
}

/// Writes to the path when given, stdout otherwise.
pub fn emit(out: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::BadConfig(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
