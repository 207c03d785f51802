use thiserror::Error;

/// Errors raised by the library. Failed inequalities are reported as
/// data in the various report types, never through this enum.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("top faces have mixed sizes ({first} vs {other})")]
    MixedDimension { first: usize, other: usize },
    #[error("no faces given")]
    EmptyInput,
    #[error("invalid face {0:?}: repeated vertex")]
    InvalidFace(Vec<String>),
    #[error("bad dimension: expected {expected}, got {got}")]
    BadDimension { expected: String, got: usize },
    #[error("budget exceeded for {what}: count {count} > cap {cap}")]
    BudgetExceeded { what: String, cap: u128, count: u128 },
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    ConvergenceFailure { sweeps: usize, off_norm: f64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("cochain is not a cocycle at edge {edge}")]
    NotCocycle { edge: usize },
    #[error("subgroups are not linearly disjoint: {0}")]
    DisjointnessViolated(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("invalid embedding: {0}")]
    EmbeddingInvalid(String),
    #[error("integer overflow while scaling weights")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn budget(what: &str, cap: u128, count: u128) -> Result<()> {
    if count > cap {
        Err(Error::BudgetExceeded { what: what.to_string(), cap, count })
    } else {
        Ok(())
    }
}
