use crate::rational::Rat;

/// Errors surfaced by library operations.
///
/// `Resource` marks inputs that exceed an exact-computation budget (callers
/// should shrink the instance); everything else is a domain or contract
/// problem with the input itself.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("unsupported capability: {0}")]
    UnsupportedCapability(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// `cover_columns` could not reach the requested payoff level; carries the
    /// exact value of the reduced game.
    #[error("coverage infeasible: reduced game value is {achieved}, below the requested level")]
    CoverageInfeasible { achieved: Rat },

    /// The violating-core construction hit a restricted game whose value lies
    /// on the wrong side of the claimed gap. One-sided evidence: it refutes
    /// this particular run, not the existence of a gap.
    #[error("gap infeasible at round {round} ({side} step): restricted game value {restricted_value}")]
    GapInfeasible {
        round: u64,
        side: Side,
        restricted_value: Rat,
    },

    /// `fooling_series` found the truncated game value above the requested eps.
    #[error("no fooling series at this horizon: truncated game value is {achieved}")]
    ValueAboveEps { achieved: Rat },

    /// The enforcing LP is unbounded because some element is in no member.
    #[error("enforcing LP unbounded: element {element} lies in no family member within the horizon")]
    Unbounded { element: u64 },

    /// A strategy/cover conversion was asked to certify a level it does not meet.
    #[error("contract violated: edge {edge} receives payoff {achieved}, below the claimed level")]
    ContractViolated { edge: u64, achieved: Rat },

    /// An internal exactness invariant failed; indicates a bug, never bad input.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Row,
    Col,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Row => write!(f, "row"),
            Side::Col => write!(f, "col"),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
