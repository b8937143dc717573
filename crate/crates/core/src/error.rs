use thiserror::Error;

/// Everything that can go wrong in the library. Chart singularities and
/// branch cuts surface here instead of as NaNs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singular locus: {0}")]
    SingularLocus(String),
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("series did not converge: {0}")]
    NonConvergent(String),
    #[error("not a bound state: {0}")]
    NotBoundState(String),
    #[error("integrability failure: {0}")]
    Integrability(String),
    #[error("polynomial degree overflow: {0}")]
    DegreeOverflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
