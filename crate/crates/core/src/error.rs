use thiserror::Error;

/// Errors produced by the core library.
///
/// Variants fall into three families that the command-line front-end maps to
/// distinct exit codes: malformed input, mathematical validation failures, and
/// numerical non-convergence. See [`Error::class`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Parse(String),

    #[error("facet {index}: normal {normal:?} is not a primitive lattice vector")]
    NonPrimitiveNormal { index: usize, normal: Vec<i64> },

    #[error("facet {index}: normal has length {got}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },

    #[error("polytope has empty interior")]
    EmptyInterior,

    #[error("polytope is unbounded")]
    Unbounded,

    #[error("facet {0} is redundant (does not support an (n-1)-dimensional face)")]
    RedundantFacet(usize),

    #[error("barycenter is not the origin ({barycenter}); Futaki obstruction / re-center required")]
    NonzeroBarycenter { barycenter: String },

    #[error("degenerate moment data: {0}")]
    Degenerate(String),

    #[error("quadratic lies in span of first eigenspace and constants (|Phi|^2 = {0:e})")]
    DegenerateDirection(f64),

    #[error("projection degenerate: denominator {0} is not positive")]
    ProjectionDegenerate(String),

    #[error("invalid potential at x = {point:?}: Hessian is not positive definite")]
    InvalidPotential { point: Vec<f64> },

    #[error("point {0:?} is not in the interior of the polytope")]
    NotInterior(Vec<f64>),

    #[error("matrix B is not positive definite; basis is linearly dependent in L2")]
    NotPositiveDefinite,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical failure: {0}")]
    NonConvergence(String),
}

/// Coarse classification of an [`Error`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Validation,
    Numerical,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse(_)
            | Error::NonPrimitiveNormal { .. }
            | Error::DimensionMismatch { .. }
            | Error::EmptyInterior
            | Error::Unbounded
            | Error::RedundantFacet(_)
            | Error::InvalidArgument(_) => ErrorClass::Input,
            Error::NonConvergence(_) => ErrorClass::Numerical,
            _ => ErrorClass::Validation,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
