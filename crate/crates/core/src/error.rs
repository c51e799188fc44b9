use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows} rows with {len} entries")]
    NotSquare { rows: usize, len: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("exponent {p} out of range 1..={dim}")]
    PowerOutOfRange { p: usize, dim: usize },

    #[error("root solver did not converge after {iterations} iterations (last bracket [{lo}, {hi}])")]
    NoConvergence { iterations: usize, lo: f64, hi: f64 },

    #[error("variable count mismatch: expected {expected}, found {found}")]
    VariableCount { expected: usize, found: usize },

    #[error("mixed coefficient domains: {0}")]
    MixedDomains(String),

    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),

    #[error("invalid modulus {0}: need an odd prime below 2^62")]
    InvalidPrime(u64),

    #[error("all components are zero")]
    AllZero,

    #[error("components are not homogeneous of a common degree: degrees {0:?}")]
    Inhomogeneous(Vec<Option<u32>>),

    #[error("degenerate sample: {0}")]
    Degenerate(String),

    #[error("too many degenerate samples ({0}); giving up")]
    RetryBudget(usize),

    #[error("exponent matrix is singular")]
    SingularExponents,

    #[error("automorphism hypothesis violated: |det| = {0}, expected 1")]
    NotUnimodular(String),

    #[error("degree {0} is not a Henon factor degree (need >= 2)")]
    HenonDegree(u64),

    #[error("orbit hits the pole x + b = 0 at step {step}")]
    OrbitPole { step: usize },

    #[error("reduction failure: {0}")]
    Reduction(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
