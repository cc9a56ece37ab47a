//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Operator/state dimensions do not match.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    /// An operator flagged Hermitian failed the Hermiticity contract.
    #[error("non-Hermitian input: max|A - A†| = {0:.3e}")]
    NonHermitian(f64),

    /// A numerical-consistency contract was violated (norm drift,
    /// imaginary residue, trace drift, ...).
    #[error("numerical contract violated: {0}")]
    Numerics(String),

    /// Density-matrix positivity violated beyond tolerance; reduce the step.
    #[error("positivity violated (min eigenvalue {min_eig:.3e}); reduce dt below {dt:.3e}")]
    Positivity { min_eig: f64, dt: f64 },

    /// Error-propagation slope too small for a meaningful precision.
    #[error("degenerate slope: |d<Jz>/dx| = {0:.3e}, precision undefined")]
    DegenerateSlope(f64),

    /// Closed forms for cat states are defined for even particle number.
    #[error("closed form undefined for odd N = {0}; use the numerical evolution path")]
    OddParticleNumber(usize),

    /// Bad configuration (CLI / config file).
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
