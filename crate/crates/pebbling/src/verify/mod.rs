//! Desk-scale verification harness: every suite compares implementations
//! against independent brute-force oracles or certifies structural claims,
//! and reports counterexamples rather than asserting.

pub mod adversary;
mod gadget_suite;
mod orderability_suite;
pub mod oracle;
mod roundtrip_suite;
mod rpn_suite;
mod star_suite;

pub use gadget_suite::{
    certify_gadget, gap_constant, verify_gadget_suite, GadgetCertification, GapConstantReport,
};
pub use orderability_suite::verify_orderability_suite;
pub use roundtrip_suite::{verify_reduction_roundtrips, RoundtripSuite};
pub use rpn_suite::verify_rpn_structure;
pub use star_suite::verify_star_lemma;

use serde::Serialize;

/// Machine-readable outcome of one verification suite. A suite passes iff
/// it has no counterexamples and exhausted no budget.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub cases: u64,
    pub counterexamples: Vec<String>,
    pub budget_exhausted: bool,
    /// Measured values worth reporting (thresholds, constants, diameters).
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn new(suite: &str) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            seed: None,
            cases: 0,
            counterexamples: Vec::new(),
            budget_exhausted: false,
            notes: Vec::new(),
        }
    }

    pub fn ok(&self) -> bool {
        self.counterexamples.is_empty() && !self.budget_exhausted
    }

    pub fn fail(&mut self, message: String) {
        // Cap the list so a systematic failure stays readable.
        if self.counterexamples.len() < 64 {
            self.counterexamples.push(message);
        } else if self.counterexamples.len() == 64 {
            self.counterexamples.push("... (more suppressed)".to_string());
        }
    }

    pub fn note(&mut self, message: String) {
        self.notes.push(message);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}
