use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Two operands disagree on a physical or numerical parameter (ħ, grid).
    #[error("parameter mismatch: {0}")]
    Parameter(String),

    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The Gaussian kernel of a star product is singular for these exponents.
    #[error("nonintegrable star product: det(I + hbar^2 adj(B) A) = {det:e}")]
    NonintegrableStar { det: f64 },

    #[error("grid spec mismatch: {0}")]
    SpecMismatch(String),

    #[error(
        "integration box too small: |W| = {boundary_max:e} on the boundary; \
         required box [{qmin}, {qmax}] x [{pmin}, {pmax}]"
    )]
    BoxTooSmall {
        boundary_max: f64,
        qmin: f64,
        qmax: f64,
        pmin: f64,
        pmax: f64,
    },

    #[error("series did not converge: {0}")]
    NonConvergence(String),

    #[error("root bracketing failed: {0}")]
    RootBracket(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
