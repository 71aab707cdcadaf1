use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported algebra dimension n = {0} (supported: 2, 3)")]
    UnsupportedDimension(usize),
    #[error("multivector dimension mismatch: n = {left} vs n = {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("grade {grade} out of range for n = {n}")]
    GradeOutOfRange { grade: usize, n: usize },
    #[error("multivector is not invertible: <m>_1^2 equals <m>_0^2")]
    NonInvertible,
    #[error("multivector has grades above 1; closed-form inverse does not apply")]
    UnsupportedGradeContent,
    #[error("expected a vector (grade-1 multivector)")]
    NotAVector,
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("mother wavelet is not admissible: {0}")]
    NotAdmissible(String),
    #[error("parity violation: {0}")]
    ParityViolation(String),
    #[error("admissibility constant is not scalar (|<C>_1| = {0:e})")]
    NonScalarConstant(f64),
    #[error("malformed file: {0}")]
    Format(String),
    #[error("checksum mismatch: stored {stored:#018x}, computed {computed:#018x}")]
    Checksum { stored: u64, computed: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
