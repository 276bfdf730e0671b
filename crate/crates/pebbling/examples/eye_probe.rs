use std::time::Instant;
use pebbling::reductions::{build_gadget, GadgetSpec};
use pebbling::solvers::SearchBudget;
use pebbling::verify::certify_gadget;

fn main() {
    let budget = SearchBudget::new(5_000_000, 600.0);
    for spec in [GadgetSpec::null(2), GadgetSpec::fork(2, 2)] {
        let t = Instant::now();
        let (cert, report) = certify_gadget(&spec, budget);
        println!(
            "{:?}: overflow={} potency={} critical={} ok={} [{:.2?}] notes={:?} ces={:?}",
            cert.kind, cert.overflow_threshold, cert.potency_threshold, cert.critical_size,
            report.ok(), t.elapsed(), report.notes, report.counterexamples
        );
    }
    let _ = build_gadget(&GadgetSpec::eye(2, 2));
    println!("eye build ok; starting eye certification...");
    let t = Instant::now();
    let (cert, report) = certify_gadget(&GadgetSpec::eye(2, 2), budget);
    println!(
        "Eye: overflow={} potency={} critical={} ok={} [{:.2?}] notes={:?} ces={:?}",
        cert.overflow_threshold, cert.potency_threshold, cert.critical_size,
        report.ok(), t.elapsed(), report.notes, report.counterexamples
    );
}
