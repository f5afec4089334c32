use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("probability out of range: {0}")]
    InvalidProbability(f64),

    #[error("no sign change on [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("validation error: {0}")]
    Validation(String),

    /// The improved acceptance sets need `mu0 < 2 * delta`.
    #[error("construction infeasible: mu0 = {mu0} is not below 2*delta = {two_delta}")]
    Infeasible { mu0: f64, two_delta: f64 },

    #[error("degenerate evidence at y = {y}: both likelihoods vanish")]
    DegenerateEvidence { y: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
