use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the kernel, the document layer and the exporters.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter {value} outside domain [{start}, {end}]")]
    Domain { value: f64, start: f64, end: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerically singular system: pivot {index} below threshold")]
    Singular { index: usize },

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("profile {profile} and guide {guide} do not intersect (closest distance {distance:e})")]
    NoIntersection { profile: usize, guide: usize, distance: f64 },

    #[error("profile {profile} and guide {guide} intersect {count} times; expected exactly one")]
    AmbiguousIntersection { profile: usize, guide: usize, count: usize },

    #[error("invalid curve network: {0}")]
    Network(String),

    #[error("reparametrization error: {0}")]
    Reparametrization(String),

    #[error("cyclic continuity dependencies between guide parts {cycle:?}")]
    Cycle { cycle: Vec<usize> },

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    #[error("validation error at {path}: {message}")]
    Validation { path: String, message: String },

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True when the curve network itself is unusable: missing or repeated
    /// intersections, or curves in the wrong arrangement.
    pub fn is_network(&self) -> bool {
        matches!(
            self,
            Error::Network(_) | Error::NoIntersection { .. } | Error::AmbiguousIntersection { .. }
        )
    }

    /// True for failures of the numerical machinery as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Singular { .. } | Error::Numeric(_) | Error::Reparametrization(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
