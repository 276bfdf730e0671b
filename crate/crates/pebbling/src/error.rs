//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("vertex {vertex} out of range for {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("loop edge at vertex {vertex}")]
    LoopEdge { vertex: usize },
    #[error("duplicate edge {{{u},{v}}}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("{{{u},{v}}} is not an edge")]
    NotAnEdge { u: usize, v: usize },
    #[error("vertex {vertex} has {have} pebbles; a move needs 2")]
    InsufficientPebbles { vertex: usize, have: u64 },
    #[error("move {index} in the sequence is illegal")]
    IllegalAt { index: usize },
    #[error("pebble-count arithmetic overflow")]
    Overflow,
    #[error("distribution has {len} entries for a graph on {vertex_count} vertices")]
    LengthMismatch { len: usize, vertex_count: usize },
    #[error("vertex {vertex} carries pebbles but has no path to the root")]
    Disconnected { vertex: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderabilityError {
    #[error("signature contains a directed cycle")]
    NotAcyclic,
    #[error("signature is not orderable under the given distribution")]
    NotOrderable,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("graph is not a tree")]
    NotATree,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumbersError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("distribution is not positive on every vertex")]
    NotPositive,
    #[error("search budget exceeded after {states_explored} states")]
    BudgetExceeded { states_explored: u64 },
}

/// Parse error for the text formats, with a 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("formula is not restricted: {0}")]
    NotRestricted(String),
    #[error("formula is not in canonical form: {0}")]
    NotCanonical(String),
    #[error("invalid gadget parameters: {0}")]
    InvalidSpec(String),
    #[error("pure universal variable x{0} cannot be simplified soundly")]
    PureUniversal(usize),
}
