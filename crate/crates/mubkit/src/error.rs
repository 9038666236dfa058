use thiserror::Error;

/// Errors shared across the crate.
///
/// Verification routines do not use this type for *findings*; those are
/// returned as reports so a caller can inspect every violation at once.
/// `Error` covers precondition failures and unusable inputs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("size {0} exceeds the configured cap of {1}")]
    SizeCap(u64, u64),
    #[error("gram matrix is singular; input was not a basis")]
    SingularGram,
    #[error("latin squares are not mutually orthogonal")]
    NotOrthogonal,
    #[error("matrix dimensions do not match: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("entry ({0},{1}) has modulus {2}, not 1")]
    NotUnimodular(usize, usize, f64),
    #[error("matrices do not commute (max commutator entry {0:.3e})")]
    NotCommuting(f64),
    #[error("matrix is not normal (deviation {0:.3e})")]
    NotNormal(f64),
    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("matrix is not traceless (|tr| = {0:.3e})")]
    NotTraceless(f64),
    #[error("eigenvalues remained degenerate after {0} redraws")]
    DegenerateAfterRetries(u32),
    #[error("expected {expected} matrices, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("error basis carries no index map")]
    NotIndexed,
    #[error("basis is not nice: {0}")]
    NotNice(String),
    #[error("input failed verification: {0}")]
    VerificationFailed(String),
    #[error("matrix is not a generalized Hadamard (deviation {0:.3e})")]
    NotHadamard(f64),
    #[error("parallel classes do not form a net: {0}")]
    BadNet(String),
    #[error("cannot dephase: entry ({0},{1}) has modulus {2:.3e}")]
    ZeroEntry(usize, usize, f64),
    #[error("cartan subalgebra is not closed under the adjoint")]
    NotDaggerClosed,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
