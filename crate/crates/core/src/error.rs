use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate triangle (|det| = {det:e})")]
    DegenerateTriangle { det: f64 },

    #[error("invalid interval [{start}, {end}]: start must be strictly below end")]
    InvalidInterval { start: f64, end: f64 },

    #[error("point {point:?} lies outside the domain")]
    OutOfDomain { point: Vec<f64> },

    #[error("unsupported degree {degree}: {reason}")]
    UnsupportedDegree { degree: usize, reason: &'static str },

    #[error("vertical scaling factor {value} at index {index} must satisfy |alpha| < 1")]
    InvalidScaling { index: usize, value: f64 },

    #[error("need at least 2 interpolation points, got {0}")]
    TooFewPoints(usize),

    #[error("abscissae must be strictly increasing (violated at index {0})")]
    NotIncreasing(usize),

    #[error("epsilon {epsilon} outside the admissible range (0, {upper})")]
    InvalidEpsilon { epsilon: f64, upper: f64 },

    #[error("iterated function system is not certified hyperbolic (ratio {ratio})")]
    NotHyperbolic { ratio: f64 },

    #[error("quadrature denominator {0:e} is numerically zero")]
    SingularDenominator(f64),

    #[error("invalid subdivision parameter d = {d}: {reason}")]
    InvalidSubdivision { d: usize, reason: &'static str },

    #[error("shape mismatch: expected {expected} values, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("partition has no sample values attached")]
    MissingSamples,

    #[error("no convergence after {evaluations} evaluations (last error estimate {estimate:e})")]
    NoConvergence { evaluations: usize, estimate: f64 },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: u64,
        message: String,
    },

    #[error("{path}: input rows must be sorted by strictly increasing p (line {line})")]
    UnsortedInput { path: String, line: u64 },

    #[error("{path}: {message}")]
    VertexMismatch { path: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn out_of_domain(point: &[f64]) -> Self {
        Error::OutOfDomain {
            point: point.to_vec(),
        }
    }
}
