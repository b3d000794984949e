use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    InvalidDims(String),
    #[error("total dimension {0} exceeds the dense limit of 2^24")]
    SizeOverflow(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("subsystem index {index} out of range for {count} subsystems")]
    SubsystemOutOfRange { index: usize, count: usize },
    #[error("invalid subsystem selection: {0}")]
    InvalidSubsystemSet(String),
    #[error("state is not normalized (norm deviation {0:e})")]
    NotNormalized(f64),
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("non-finite value in input")]
    NonFinite,
    #[error("direction for subsystem {index} is not a unit vector (norm {norm})")]
    NotUnitDirection { index: usize, norm: f64 },
    #[error("operation requires an all-qubit system, found local dimension {0}")]
    NotQubitSystem(usize),
    #[error("matrix is not an isometry (deviation {0:e})")]
    NotIsometry(f64),
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("parameter out of range: {0}")]
    InvalidParameter(String),
}
