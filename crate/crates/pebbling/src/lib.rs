//! Exact graph-pebbling machinery: elementary move dynamics, orderability of
//! move multisets, exact reachability/coverability/annihilation solvers,
//! the pebbling invariants, and generators for a family of hardness-reduction
//! instances, all verifiable at desk scale against brute-force oracles.

pub mod cnf;
pub mod distribution;
pub mod error;
pub mod format;
pub mod graph;
pub mod moves;
pub mod numbers;
pub mod orderability;
pub mod reductions;
pub mod signature;
pub mod solvers;
pub mod verify;
pub mod weight;

pub use distribution::PebbleDistribution;
pub use error::{CoreError, NumbersError, OrderabilityError, ParseError, ReductionError, SolverError};
pub use graph::Graph;
pub use moves::{apply_move, apply_sequence, signature_of, MoveSequence};
pub use signature::Signature;
