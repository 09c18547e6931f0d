use thiserror::Error;

/// Failure modes of the sensor-selection library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("sensor index {0} selected more than once")]
    DuplicateSensor(usize),
    #[error("sensor index {index} out of range for {n} candidates")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("information matrix is singular or ill-conditioned")]
    SingularInformation,
    #[error("measurement matrix is rank deficient")]
    RankDeficient,
    #[error("symmetric eigensolver did not converge")]
    EigenFailure,
    #[error("reference has zero norm")]
    ZeroReference,
    #[error("requested {p} sensors from {n} candidates")]
    TooManySensors { p: usize, n: usize },
    #[error("no admissible candidate at step {step}")]
    NoAdmissibleCandidate { step: usize },
    #[error("instance too large: {count} combinations exceed the limit of {limit}")]
    InstanceTooLarge { count: u128, limit: u128 },
    #[error("{0} is not implemented")]
    NotImplemented(&'static str),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("rank {r} out of range 1..={max}")]
    RankOutOfRange { r: usize, max: usize },
    #[error("fold count {k} invalid for {m} snapshots")]
    Fold { k: usize, m: usize },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Broad class of an [`Error`], used to map failures onto process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Data,
    Numerical,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::SingularInformation
            | Error::RankDeficient
            | Error::EigenFailure
            | Error::ZeroReference
            | Error::NoAdmissibleCandidate { .. } => ErrorClass::Numerical,
            Error::Format(_) | Error::Data(_) | Error::Io(_) => ErrorClass::Data,
            _ => ErrorClass::Input,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
