//! Error type shared by the whole engine.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands belong to different coefficient/variable contexts.
    #[error("context mismatch: {0}")]
    ContextMismatch(String),

    /// A Frobenius twist exponent must be at least 1.
    #[error("invalid twist e = {0}: twists require e >= 1")]
    InvalidTwist(u64),

    /// The coefficient modulus is not prime.
    #[error("invalid modulus {0}: not a prime in [2, 2^31)")]
    InvalidModulus(u64),

    /// Bad variable context (duplicate or empty names).
    #[error("invalid context: {0}")]
    InvalidContext(String),

    /// Generator images do not preserve a relation of the source.
    #[error("not a homomorphism: relation {relation} maps to nonzero normal form {residue}")]
    NotAHomomorphism { relation: String, residue: String },

    /// Configured resource cap (S-pair reductions or enumeration size) exceeded.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// An algebra map failed structural validation.
    #[error("ill-formed map: {0}")]
    IllFormedMap(String),

    /// Exponent arithmetic left the machine-width range.
    #[error("exponent overflow: {0}")]
    ExponentOverflow(String),

    /// A finiteness certificate failed its soundness re-check. Internal bug guard.
    #[error("certificate validation failed: {0}")]
    CertificateInvalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
