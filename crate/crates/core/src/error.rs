use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("negative grid point {0}")]
    NegativeGridPoint(String),
    #[error("invalid grid {0:?}, expected start:step:end with step > 0 and end >= start >= 0")]
    InvalidGrid(String),

    #[error("invalid slope data: {0}")]
    InvalidSlopes(String),
    #[error("invalid module data: {0}")]
    InvalidModule(String),
    #[error("nonlog data unavailable")]
    NonlogUnavailable,
    #[error("perfect_residue flags differ")]
    ResidueFlagMismatch,
    #[error("not isoclinic in {0} mode")]
    NotIsoclinic(&'static str),
    #[error("equal slopes, result indeterminate, use swan_tensor_bounds")]
    EqualSlopes,
    #[error("twisting module must have rank 1, got rank {0}")]
    NotRankOne(u64),
    #[error("non-cancellation hypothesis not assumed while a slope equals the twist slope {0}")]
    HypothesisNotAssumed(String),
    #[error("{p} divides {m}; reduce the exponent first")]
    DivisibleExponent { m: u64, p: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("curve multiplicities alpha and beta are both zero")]
    ZeroMultiplicities,

    #[error("invalid divisor: {0}")]
    InvalidDivisor(String),
    #[error("invalid coherent token: {0}")]
    InvalidToken(String),
    #[error("unknown fiber {fiber:?} on token {token:?}")]
    UnknownFiber { token: String, fiber: String },
    #[error("fiber label sets differ between {0:?} and {1:?}")]
    FiberMismatch(String, String),
    #[error("token {0:?} registered twice with different data")]
    ConflictingToken(String),
    #[error("no value for {0:?}")]
    MissingValue(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("negative input: {0}")]
    NegativeInput(String),

    #[error("oracle disagreement: {0}")]
    OracleMismatch(String),
}
