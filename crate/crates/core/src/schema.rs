//! JSON wire formats shared between the library and the command-line front
//! end. Complex numbers travel as `[re, im]` pairs.
//!
//! - X state: `{"n": 2, "diag": [...], "anti": [[re, im], ...]}`
//! - dense state: `{"n": 2, "dense": [[[re, im], ...], ...]}`
//! - Hamiltonian: `{"eps": [...], "gamma": g}`
//!
//! Deserializing only checks shape; converting into a domain type runs the
//! physical validation, so callers can tell parse errors from invalid
//! states.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonians::BatteryHamiltonian;
use crate::matops::ComplexMatrix;
use crate::states::{DensityMatrix, XState};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct XStateFile {
    pub n: usize,
    pub diag: Vec<f64>,
    pub anti: Vec<[f64; 2]>,
}

impl XStateFile {
    pub fn from_state(state: &XState) -> Self {
        Self {
            n: state.n(),
            diag: state.diag().to_vec(),
            anti: state.anti().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_state(&self) -> Result<XState> {
        let anti = self
            .anti
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        XState::new(self.n, self.diag.clone(), anti)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DenseStateFile {
    pub n: usize,
    pub dense: Vec<Vec<[f64; 2]>>,
}

impl DenseStateFile {
    pub fn from_state(state: &DensityMatrix) -> Self {
        let m = state.matrix();
        let dense = (0..m.dim())
            .map(|i| {
                (0..m.dim())
                    .map(|j| {
                        let z = m.get(i, j);
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        Self { n: state.n(), dense }
    }

    pub fn to_state(&self) -> Result<DensityMatrix> {
        let dim = 1usize << self.n;
        if self.dense.len() != dim {
            return Err(Error::BadLength {
                expected: dim,
                got: self.dense.len(),
            });
        }
        let rows: Vec<Vec<Complex64>> = self
            .dense
            .iter()
            .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .collect();
        DensityMatrix::new(self.n, ComplexMatrix::from_rows(&rows)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HamiltonianFile {
    pub eps: Vec<f64>,
    pub gamma: f64,
}

impl HamiltonianFile {
    pub fn from_hamiltonian(h: &BatteryHamiltonian) -> Self {
        Self {
            eps: h.eps().to_vec(),
            gamma: h.gamma(),
        }
    }

    pub fn to_hamiltonian(&self) -> Result<BatteryHamiltonian> {
        BatteryHamiltonian::new(self.eps.clone(), self.gamma)
    }
}

/// Either state schema; deserialization tries the compact X form first.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateFile {
    X(XStateFile),
    Dense(DenseStateFile),
}

/// A state loaded from disk, in whichever representation the file used.
#[derive(Clone, Debug)]
pub enum LoadedState {
    X(XState),
    Dense(DensityMatrix),
}

impl StateFile {
    pub fn to_state(&self) -> Result<LoadedState> {
        match self {
            StateFile::X(file) => Ok(LoadedState::X(file.to_state()?)),
            StateFile::Dense(file) => Ok(LoadedState::Dense(file.to_state()?)),
        }
    }
}

impl LoadedState {
    pub fn n(&self) -> usize {
        match self {
            LoadedState::X(x) => x.n(),
            LoadedState::Dense(d) => d.n(),
        }
    }
}
