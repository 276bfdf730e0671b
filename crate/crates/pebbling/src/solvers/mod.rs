//! Exact decision procedures over the pebbling move dynamics.

mod annihilate;
mod cover;
mod fold;
mod greedy;
mod nonrep;
mod reach;

pub use annihilate::annihilation;
pub use cover::coverable;
pub use fold::FoldedInstance;
pub use greedy::greedy_tree_max;
pub use nonrep::{nonrepetitive_reachable, nonrepetitive_reachable_with_budget, NonrepReport};
pub use reach::{is_determinative, max_pebbles, reachable, DecisionReport, MaxPebblesReport};

use std::time::Instant;

use crate::signature::Signature;

/// Limits for the exact searches. Exceeding a budget is a distinct outcome,
/// never coerced to a `false` answer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBudget {
    pub max_states: u64,
    pub max_seconds: f64,
}

impl SearchBudget {
    pub fn new(max_states: u64, max_seconds: f64) -> SearchBudget {
        assert!(max_states > 0 && max_seconds > 0.0);
        SearchBudget {
            max_states,
            max_seconds,
        }
    }

    /// Effectively unlimited; useful for small deterministic suites.
    pub fn unbounded() -> SearchBudget {
        SearchBudget {
            max_states: u64::MAX,
            max_seconds: f64::INFINITY,
        }
    }
}

impl Default for SearchBudget {
    fn default() -> SearchBudget {
        SearchBudget {
            max_states: 10_000_000,
            max_seconds: 60.0,
        }
    }
}

/// Running tally against a budget; time is polled every few thousand states
/// so the hot path stays cheap.
pub(crate) struct BudgetMeter {
    budget: SearchBudget,
    start: Instant,
    pub states: u64,
    exceeded: bool,
}

impl BudgetMeter {
    pub fn new(budget: SearchBudget) -> BudgetMeter {
        BudgetMeter {
            budget,
            start: Instant::now(),
            states: 0,
            exceeded: false,
        }
    }

    /// Counts one state; returns false once the budget is exhausted.
    pub fn tick(&mut self) -> bool {
        if self.exceeded {
            return false;
        }
        self.states += 1;
        if self.states > self.budget.max_states {
            self.exceeded = true;
            return false;
        }
        if self.states % 8192 == 0
            && self.start.elapsed().as_secs_f64() > self.budget.max_seconds
        {
            self.exceeded = true;
            return false;
        }
        true
    }

    pub fn exceeded(&self) -> bool {
        self.exceeded
    }
}

/// Outcome of a reachability-style decision. When `answer` is true the
/// witness is present and orderable under the input distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachReport {
    /// False iff the search ran out of budget before deciding.
    pub decided: bool,
    pub answer: bool,
    pub witness: Option<Signature>,
    pub states_explored: u64,
}

impl ReachReport {
    pub(crate) fn undecided(states: u64) -> ReachReport {
        ReachReport {
            decided: false,
            answer: false,
            witness: None,
            states_explored: states,
        }
    }

    pub(crate) fn no(states: u64) -> ReachReport {
        ReachReport {
            decided: true,
            answer: false,
            witness: None,
            states_explored: states,
        }
    }

    pub(crate) fn yes(witness: Signature, states: u64) -> ReachReport {
        ReachReport {
            decided: true,
            answer: true,
            witness: Some(witness),
            states_explored: states,
        }
    }
}
