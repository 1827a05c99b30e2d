use thiserror::Error;

/// Every failure the toolkit reports.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("resultant of two zero polynomials is undefined")]
    BothZero,
    #[error("polynomial must be nonconstant")]
    ConstantPolynomial,
    #[error("input is not squarefree")]
    NotSquarefree,
    #[error("input depends on a single variable; handle univariate inputs separately")]
    UnivariateInput,
    #[error("total degree {degree} exceeds the configured cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
    #[error("need at least {need} distinct sample ordinates, got {have}")]
    InsufficientSamples { have: usize, need: usize },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("bound violated: {0}")]
    BoundViolated(String),
    #[error("degenerate system: {0}")]
    DegenerateSystem(String),
    #[error("degenerate set specification: {0}")]
    DegenerateSpec(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("decomposition failed: {0}")]
    DecompositionFailed(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
