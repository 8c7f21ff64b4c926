use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the domain of the operation (negative photon
    /// numbers, unphysical covariance, `t` outside `(0, 1)`, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical routine failed (singular matrix, no convergence, ...).
    #[error("numerical failure: {0}")]
    Numeric(String),

    /// A caller broke an API contract (mismatched dimensions, non-symmetric
    /// covariance, non-symplectic transform).
    #[error("contract violation: {0}")]
    Contract(String),

    /// The truncated Fock representation lost too much probability mass.
    #[error("truncation: tail mass {tail_mass:.3e} at cutoff {cutoff}; try cutoff >= {suggested_cutoff}")]
    Truncation {
        tail_mass: f64,
        cutoff: usize,
        suggested_cutoff: usize,
    },

    /// A root or threshold search found no sign change on its bracket.
    #[error("not found: {0}")]
    NotFound(String),

    /// A run configuration is incomplete or inconsistent.
    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
