//! Battery capacity analysis for n-qubit X states.
//!
//! The capacity of a state `rho` under a Hamiltonian `H` is the spread of
//! energy reachable by unitaries, computed by pairing the descending state
//! spectrum against the anti-ordered Hamiltonian spectrum. This crate
//! provides:
//!
//! - [`matops`]: dense complex matrices, tensor products, partial traces,
//!   permutation conjugation, a cyclic Jacobi eigensolver, majorization;
//! - [`states`]: X states (diagonal + anti-diagonal) with closed-form
//!   spectra, Bell-diagonal and noisy-GHZ constructors, dephasing;
//! - [`hamiltonians`]: local sigma_z energies plus a global sigma_x^(x n)
//!   interaction, with a closed-form spectrum;
//! - [`capacity`]: the capacity functional, its dephasing lower bound, and
//!   Schur-convexity checks;
//! - [`distribution`]: marginal capacities, residual battery capacity and
//!   its incoherent/coherent split, monogamy audits, the three-qubit
//!   relations and critical-interaction search;
//! - [`gain`]: permutation-unitary optimization of the distribution;
//! - [`fuzz`]: seeded randomized verification suites;
//! - [`schema`]: the JSON wire formats used by the CLI.

pub mod capacity;
pub mod distribution;
pub mod error;
pub mod fuzz;
pub mod gain;
pub mod hamiltonians;
pub mod matops;
pub mod schema;
pub mod states;

pub use capacity::{
    capacity, capacity_lower_bound, capacity_of, schur_pair_check, CapacityValue, SchurPairReport,
};
pub use error::{Error, Result};
pub use hamiltonians::{local_hamiltonian, BatteryHamiltonian};
pub use matops::{
    conjugate_by_permutation, eig_hermitian, is_majorized, kron, partial_trace, ComplexMatrix,
    HermitianSpectrum, Permutation,
};
pub use states::{BatteryState, DensityMatrix, XState};
