use thiserror::Error;

/// How a failure should be reported by the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// A computation ran but produced an unacceptable number.
    Numerical,
    /// Inputs violate a mathematical precondition (off-locus point, empty locus, ...).
    Precondition,
    /// Malformed user configuration.
    Config,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("invalid half-weight: {0}")]
    InvalidWeight(String),
    #[error("zero factor: {0}")]
    ZeroFactor(String),
    #[error("torus element lies on the wall of positive root #{root} ({detail})")]
    OnWall { root: usize, detail: String },
    #[error("outside the injectivity domain of exp: {0}")]
    OutsideInjectivity(String),
    #[error("matrix is not a group element: {0}")]
    NotInGroup(String),
    #[error("standing assumption violated: {0}")]
    Assumption(String),
    #[error("point is off the locus (cone distance {0:e})")]
    OffLocus(f64),
    #[error("empty locus: {0}")]
    EmptyLocus(String),
    #[error("transversality broken: {0}")]
    Transversality(String),
    #[error("vector is not in the {space} (residual {residual:e})")]
    NotInSubspace { space: &'static str, residual: f64 },
    #[error("displacement outside the chart: {0}")]
    ChartRadius(String),
    #[error("quadrature did not converge: coarse estimate {coarse}, refined estimate {fine}")]
    NotConverged { coarse: String, fine: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("not supported: {0}")]
    Unsupported(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Assumption(_)
            | Error::OffLocus(_)
            | Error::EmptyLocus(_)
            | Error::Transversality(_)
            | Error::NotInSubspace { .. }
            | Error::ChartRadius(_)
            | Error::OutsideInjectivity(_)
            | Error::OnWall { .. }
            | Error::NotInGroup(_)
            | Error::InvalidWeight(_)
            | Error::ZeroFactor(_) => ErrorClass::Precondition,
            Error::UnsupportedGroup(_)
            | Error::InvalidMetric(_)
            | Error::Unsupported(_)
            | Error::Config(_)
            | Error::Io(_)
            | Error::Json(_) => ErrorClass::Config,
            Error::NotConverged { .. } | Error::Dimension(_) | Error::CheckFailed(_) => {
                ErrorClass::Numerical
            }
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
