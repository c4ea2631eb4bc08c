//! Shared error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The requested graph is not connected.
    #[error("graph is not connected: {0}")]
    DisconnectedGraph(String),

    /// A constructor was called with out-of-range sizes or malformed input.
    #[error("invalid size: {0}")]
    InvalidSize(String),

    /// A computation would exceed a configured dimension cap.
    #[error("{what} ({size}) exceeds the configured cap ({cap}); raise the cap to proceed")]
    DimensionCap {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    /// The iterative eigensolver ran out of basis vectors before convergence.
    #[error("eigensolver did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    /// The shifted factorization hit a pivot too close to zero; the shift is
    /// (numerically) an eigenvalue and the caller should move it.
    #[error("factorization of the shifted matrix is near-singular at pivot {pivot_index} (value {pivot:e})")]
    SingularShift { pivot_index: usize, pivot: f64 },

    /// Particle number incompatible with the requested droplet analysis.
    #[error("invalid particle number: {0}")]
    InvalidParticleNumber(String),

    /// The droplet analysis requires Δ > M.
    #[error("anisotropy delta = {delta} must exceed the maximal occupation M = {max_occ}")]
    InvalidDelta { delta: f64, max_occ: usize },

    /// A computed eigenvalue lies inside a certified gap interval. Since the
    /// gap condition is a theorem, this indicates an implementation bug.
    #[error("eigenvalue {eigenvalue} lies inside the certified interval ({lo}, {hi})")]
    CertificateViolation { eigenvalue: f64, lo: f64, hi: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
