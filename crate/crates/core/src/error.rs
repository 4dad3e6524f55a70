//! Error type shared by every module.

use thiserror::Error;

/// Failures raised by the algebra routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("antisymmetry violation: {0}")]
    AntisymmetryViolation(String),
    #[error("not a finite-type Cartan matrix: {0}")]
    NotFiniteType(String),
    #[error("bar involution is not involutive: {0}")]
    BarNotInvolutive(String),
    #[error("recursion parity failure: {0}")]
    RecursionParityFailure(String),
    #[error("parabolic subgroup is infinite: {0}")]
    InfiniteParabolic(String),
    #[error("no coset representative satisfies the X-condition: {0}")]
    RepresentativeAmbiguity(String),
    #[error("wedge rewrite reached the frozen tail: {0}")]
    TruncationBreach(String),
    #[error("rewrite changed the index sum: {0}")]
    SumViolation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
