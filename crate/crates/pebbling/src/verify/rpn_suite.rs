//! Structural certification of the quantified-formula instance: the
//! five-pebble cap on the underlying graph under every boosted
//! distribution, at most two gadgets per vertex, the logarithmic diameter,
//! a polynomial budget, and the base-graph correspondence between boosted
//! distributions and restricted satisfiability.

use std::collections::BTreeMap;

use crate::cnf::QuantifiedCnf;
use crate::reductions::{build_rpn_instance, RpnParams};
use crate::solvers::{nonrepetitive_reachable_with_budget, reachable, SearchBudget};

use super::SuiteReport;

pub fn verify_rpn_structure(
    f: &QuantifiedCnf,
    params: RpnParams,
    budget: SearchBudget,
) -> SuiteReport {
    let mut report = SuiteReport::new("rpn-structure");
    let inst = match build_rpn_instance(f, params) {
        Ok(inst) => inst,
        Err(e) => {
            report.fail(format!("build failed: {e}"));
            return report;
        }
    };
    let universals = &inst.universal_vars;
    report.note(format!(
        "alpha={} beta={} c={} n(G2)={} n(H)={} k={}",
        inst.alpha,
        inst.beta,
        inst.c,
        inst.g2.graph.vertex_count(),
        inst.instance.graph.vertex_count(),
        inst.instance.budget_k.unwrap_or(0)
    ));

    // Every boosted underlying distribution keeps each vertex at or below
    // five pebbles (exact solver, per vertex).
    let assignments = all_assignments(universals);
    for f_assign in &assignments {
        let p2f = inst.p2f(f_assign);
        if p2f.counts().iter().any(|&c| c > 2) {
            report.fail("boosted distribution exceeds two pebbles somewhere".to_string());
        }
        let g2 = &inst.g2.graph;
        for v in 0..g2.vertex_count() {
            report.cases += 1;
            let rep = reachable(g2, &p2f, v, 6, budget);
            if !rep.decided {
                report.budget_exhausted = true;
                report.fail(format!(
                    "five-pebble cap undecided at vertex {v} ({} states)",
                    rep.states_explored
                ));
                return report;
            }
            if rep.answer {
                report.fail(format!(
                    "six pebbles reachable on underlying vertex {v} under {f_assign:?}"
                ));
            }
        }
        // Base-graph correspondence: a nonrepetitive sequence reaches the
        // target iff some existential completion satisfies the formula.
        report.cases += 1;
        let p1f = inst.p1f(f_assign);
        let nonrep =
            nonrepetitive_reachable_with_budget(&inst.g1.graph, &p1f, inst.r, budget);
        let satisfiable = exists_existential(f, f_assign);
        if !nonrep.decided {
            report.budget_exhausted = true;
        } else if nonrep.answer != satisfiable {
            report.fail(format!(
                "base-graph correspondence fails under {f_assign:?}: nonrep={} sat={}",
                nonrep.answer, satisfiable
            ));
        }
    }

    // Gadget counting: between one and two gadgets on every non-target
    // underlying vertex, none on the target.
    let hist = inst.gadgets_per_vertex();
    report.cases += 1;
    if let Some(v) = (0..hist.len()).find(|&v| hist[v] > 2) {
        report.fail(format!("vertex {v} carries {} gadgets", hist[v]));
    }
    if let Some(v) = (0..hist.len()).find(|&v| v != inst.r && hist[v] == 0) {
        report.fail(format!("vertex {v} carries no gadget"));
    }
    report.note(format!(
        "gadget histogram max = {}",
        hist.iter().max().copied().unwrap_or(0)
    ));

    // Diameter: within 2*beta + (2c + 2).
    report.cases += 1;
    let diam = inst
        .instance
        .graph
        .diameter()
        .expect("output graph connected");
    let allowance = 2 * inst.beta as usize + 2 * inst.c as usize + 2;
    report.note(format!("diameter(H) = {diam}, 2*beta + 2c + 2 = {allowance}"));
    if diam > allowance {
        report.fail(format!("diameter {diam} exceeds allowance {allowance}"));
    }

    // Budget: small against the output size (reported, plus a coarse
    // polynomial sanity bound).
    report.cases += 1;
    let k = inst.instance.budget_k.unwrap_or(0);
    let nh = inst.instance.graph.vertex_count() as u64;
    if k > nh * nh {
        report.fail(format!("budget k={k} exceeds n(H)^2 = {}", nh * nh));
    }

    // Critical selections always have size k and avoid the underlying
    // graph entirely.
    for f_assign in &assignments {
        report.cases += 1;
        let sel = inst.critical_selection(f_assign);
        if sel.size().unwrap() != k {
            report.fail("critical selection size differs from k".to_string());
        }
        if (0..inst.g2.graph.vertex_count()).any(|v| sel.count(v) > 0) {
            report.fail("critical selection touches the underlying graph".to_string());
        }
    }
    report
}

fn all_assignments(universals: &[usize]) -> Vec<BTreeMap<usize, bool>> {
    let mut out = Vec::new();
    for mask in 0u64..(1 << universals.len()) {
        out.push(
            universals
                .iter()
                .enumerate()
                .map(|(i, &v)| (v, (mask >> i) & 1 == 1))
                .collect(),
        );
    }
    out
}

fn exists_existential(f: &QuantifiedCnf, fixed: &BTreeMap<usize, bool>) -> bool {
    let vars = f.appearing_vars();
    let free: Vec<usize> = vars
        .iter()
        .copied()
        .filter(|v| !fixed.contains_key(v))
        .collect();
    let mut assignment = vec![false; f.num_vars];
    for (&v, &b) in fixed {
        assignment[v] = b;
    }
    for mask in 0u64..(1 << free.len()) {
        for (i, &v) in free.iter().enumerate() {
            assignment[v] = (mask >> i) & 1 == 1;
        }
        if f.evaluate(&assignment) {
            return true;
        }
    }
    false
}
