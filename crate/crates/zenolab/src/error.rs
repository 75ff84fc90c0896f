//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid Hilbert space: {0}")]
    InvalidSpace(String),
    #[error("factor index {index} out of range for {nfactors} factors")]
    FactorOutOfRange { index: usize, nfactors: usize },
    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("not a valid density matrix: {0}")]
    NotDensity(String),
    #[error("operator is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("operator is not an involution (deviation {0:.3e})")]
    NotInvolution(f64),
    #[error("map is not an idempotent CPTP projector: {0}")]
    NotProjector(String),
    #[error("map is not CPTP: {0}")]
    NotCptp(String),
    #[error("map is not Hermiticity-preserving (deviation {0:.3e})")]
    NotHermiticityPreserving(f64),
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("spectral decomposition is defective or near-degenerate: {0}")]
    SpectralDefect(String),
    #[error("eigensolver failed to converge: {0}")]
    EigConvergence(String),
    #[error("matrix exponential overflow: {0}")]
    Overflow(String),
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("linear algebra backend: {0}")]
    Linalg(String),
    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
    #[error("model file: {0}")]
    Model(String),
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Linalg(e.to_string())
    }
}
