use thiserror::Error;

/// Errors raised by the engine. Variants name the offending datum where one exists.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid torsion order {0}: orders must be at least 2")]
    InvalidOrder(i64),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),
    #[error("invalid evaluation datum: {0}")]
    InvalidEvaluation(String),
    #[error("multiplicative sets differ")]
    SetMismatch,
    #[error("fraction equality needs a torsion-free character group")]
    TorsionUnsupported,
    #[error("1 - t^{0} is not invertible: the character restricts trivially")]
    NotInvertible(String),
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("prime {prime} divides n = {n} but not r = {r}")]
    PrimeNotInverted { prime: u64, n: u64, r: u64 },
    #[error("coefficient {0} is not in Z[1/{1}]")]
    NotInverted(String, u64),
    #[error("empty set")]
    EmptySet,
    #[error("ray {index} is not primitive: {ray:?}")]
    NotPrimitive { index: usize, ray: Vec<i64> },
    #[error("cone {index} is not smooth (|det| = {det})")]
    NotSmooth { index: usize, det: i64 },
    #[error("fan is not complete: {0}")]
    NotComplete(String),
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("inconsistent Cartier data: {0}")]
    InconsistentData(String),
    #[error("lattice-point oracle too large: {0} candidate points")]
    OracleTooLarge(u128),
    #[error("not a Laurent polynomial: division by 1 - t^{0} leaves a remainder")]
    NotPolynomial(String),
    #[error("vertex {0:?} has a non-smooth or non-simple tangent cone")]
    NotSmoothVertexCone(Vec<i64>),
    #[error("polytope is empty or unbounded")]
    Unbounded,
}

pub type Result<T> = std::result::Result<T, Error>;
