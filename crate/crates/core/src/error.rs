use thiserror::Error;

/// Errors produced by state construction, linear algebra and the capacity
/// analyses built on top of them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("expected a vector of length {expected}, got {got}")]
    BadLength { expected: usize, got: usize },

    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    #[error("matrix is not Hermitian (max |M - M^dag| entry = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("bad qubit or basis index {index}")]
    BadIndex { index: usize },

    #[error("images do not form a permutation of 0..{dim}")]
    BadPermutation { dim: usize },

    #[error("trace must be 1 (got {trace})")]
    BadTrace { trace: f64 },

    #[error("diagonal entry {index} is negative ({value})")]
    NegativeDiagonal { index: usize, value: f64 },

    #[error(
        "anti-diagonal block {index} is not positive semidefinite \
         (diag product {diag_product:.3e} < |anti|^2 = {anti_sq:.3e})"
    )]
    BlockNotPsd {
        index: usize,
        diag_product: f64,
        anti_sq: f64,
    },

    #[error("not a valid state: eigenvalue {value} is negative")]
    NotAState { value: f64 },

    #[error("noise parameter must lie in [0, 1] (got {beta})")]
    BadBeta { beta: f64 },

    #[error("operation needs {expected} qubits, state has {got}")]
    BadArity { expected: usize, got: usize },

    #[error("local energies must be non-negative and sorted descending (index {index})")]
    BadLocalEnergies { index: usize },

    #[error("interaction strength must be non-negative (got {gamma})")]
    NegativeGamma { gamma: f64 },

    #[error("spectrum not sorted in descending order at position {index}")]
    NotSorted { index: usize },

    #[error("probabilities must sum to 1 (got {sum})")]
    BadNormalization { sum: f64 },

    #[error("capacity must be non-negative (got {value})")]
    NegativeCapacity { value: f64 },

    #[error("the two capacity sums disagree by {delta:.3e}")]
    FormMismatch { delta: f64 },

    #[error("majorized state has the larger capacity ({c_rho} > {c_varrho})")]
    SchurViolation { c_rho: f64, c_varrho: f64 },

    #[error("qubit count mismatch: state has {state}, Hamiltonian has {hamiltonian}")]
    QubitMismatch { state: usize, hamiltonian: usize },

    #[error("relation is not violated at gamma = 0 (slack {slack})")]
    NotViolatedAtZero { slack: f64 },

    #[error("exhaustive search is limited to dimension 8 (got {dim})")]
    TooLarge { dim: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
