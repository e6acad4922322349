use thiserror::Error;

/// Errors raised by the engine.
///
/// Variants split into two families: bad inputs (rejected arguments, malformed
/// instances) and internal inconsistencies, which indicate that some invariant
/// the obstruction argument relies on has been violated.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(String),

    #[error("Jacobi symbol modulus must be odd and positive, got {0}")]
    BadJacobiModulus(String),

    #[error("projective point has all coordinates zero")]
    ZeroPoint,

    #[error("Hilbert symbol entries must be nonzero")]
    ZeroSymbolEntry,

    #[error("cofactor {0} has no prime factor below the trial division bound and is not prime")]
    UnfactoredCofactor(String),

    #[error("singular Weierstrass curve (zero discriminant)")]
    SingularCurve,

    #[error("point is not on the curve")]
    PointNotOnCurve,

    #[error("algebra entry is not homogeneous of even degree: {0}")]
    OddDegreeEntry(String),

    #[error("point lies on the ramification locus: algebra entry {0} vanishes")]
    OnRamificationLocus(&'static str),

    #[error("witness evaluates to {value}, expected {target}")]
    WitnessMismatch { value: String, target: String },

    #[error("no variable occurs only as a pure power; cannot arrange exact search")]
    NoSearchArrangement,

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
