use thiserror::Error;

use crate::fcalc::BracketedValue;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A Cantor specification violates its invariants.
    #[error("invalid Cantor specification: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    /// The query point is not on the depth-n support.
    #[error("point {0} is not on the support")]
    NotOnSupport(f64),

    #[error("dimension estimate inconclusive: {0}")]
    Inconclusive(String),

    /// Refinement hit its ceiling before the bracket closed; `best` is still a sound bracket.
    #[error("refinement did not converge: bracket [{}, {}] wider than tolerance {tol}", best.lower, best.upper)]
    NotConverged { best: BracketedValue, tol: f64 },

    /// Every neighbour on the support has the same staircase value as the point.
    #[error("staircase resolution too coarse at x = {0}; increase the depth")]
    Resolution(f64),
}
