use thiserror::Error;

use crate::quiver::KClass;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("quiver has a directed cycle through vertex {0}")]
    Cycle(usize),

    #[error("quiver is not connected")]
    Disconnected,

    #[error("vertex index {index} out of range 1..={n}")]
    Index { index: usize, n: usize },

    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("quiver is not of Euclidean type")]
    NotEuclidean,

    #[error("quiver is not of wild type")]
    NotWild,

    #[error("class is zero")]
    ZeroClass,

    #[error("value {0} lies outside the closed upper half-plane")]
    OutOfHalfPlane(String),

    #[error("slot {slot} holds class {class}, which is not in the heart")]
    NotInHeart { slot: usize, class: KClass },

    #[error("phase tie between selectable classes {0} and {1}")]
    PhaseTie(KClass, KClass),

    #[error("power iteration did not converge within {0} iterations")]
    NoConvergence(usize),

    #[error("sign of pairing for class {0} could not be decided")]
    Inconclusive(KClass),

    #[error("module classes are not defined this way for Dynkin quivers")]
    NotApplicable,

    #[error("class {0} is not a nonnegative nonzero dimension vector")]
    InvalidClass(KClass),

    #[error("projective point (0:0)")]
    ZeroPoint,

    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("representations over different quivers or fields")]
    MismatchedBase,

    #[error("negative Ext dimension {0}: hom/Euler bookkeeping is inconsistent")]
    NegativeExt(i64),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("parse error: {0}")]
    Parse(String),
}
