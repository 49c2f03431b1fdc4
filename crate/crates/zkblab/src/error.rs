//! Crate-wide error type.

use thiserror::Error;

/// Every failure mode surfaced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates an operation's precondition.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    /// Array shape does not match the grid it is attached to.
    #[error("shape mismatch: expected {expected} samples, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    /// A whole-line inequality was applied to a field that touches the box edge.
    #[error("decay hypothesis violated: boundary ratio {ratio:.3e} exceeds {threshold:.1e}")]
    DecayHypothesis { ratio: f64, threshold: f64 },

    /// Negative-order fractional derivative of data with a nonzero x-mean.
    #[error("nonintegrable zero mode: |mean| ratio {ratio:.3e}")]
    NonintegrableZeroMode { ratio: f64 },

    /// Quadrature did not reach its tolerance; carries the best estimate.
    #[error("quadrature did not converge: best {best:.6e}, est_error {est_error:.3e}")]
    Quadrature { best: f64, est_error: f64 },

    /// Grid cannot resolve the requested kernel or profile.
    #[error("unresolved grid: {reason}; need {axis} >= {required}")]
    UnresolvedGrid { reason: String, axis: &'static str, required: usize },

    /// Solver state reached the edge of the periodic box.
    #[error("boundary contamination at t = {t:.4}: ratio {ratio:.3e} > guard {guard:.1e}")]
    BoundaryContamination { t: f64, ratio: f64, guard: f64 },

    /// Non-finite values after a step.
    #[error("unstable step at t = {t:.4}")]
    UnstableStep { t: f64 },

    /// u^{p+1} overflowed.
    #[error("amplitude blowup at t = {t:.4}")]
    AmplitudeBlowup { t: f64 },

    /// A theorem hypothesis is not met by the data.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// Configuration file or override problem.
    #[error("config error: {0}")]
    Config(String),

    /// Filesystem or format problem.
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name: name.to_string(), reason: reason.into() }
}
