//! Reduction round trips at desk scale, each side decided independently:
//! formula satisfiability vs. nonrepetitive reachability on the formula
//! graph; nonrepetitive reachability vs. plain reachability across
//! one-use subdivisions; the reach-to-cover shift; Hamiltonian paths vs.
//! annihilation on the apex instance; and rooted reachability vs. the
//! optimal pebbling bound on the star-attached instance.

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cnf::{example_formula, Lit, QuantifiedCnf};
use crate::distribution::PebbleDistribution;
use crate::graph::Graph;
use crate::moves::signature_of;
use crate::numbers::pi_hat_le;
use crate::orderability::boost_target;
use crate::reductions::{
    build_annihilation_from_hampath, build_gnpr, build_gpr, build_opn_instance,
    build_pc_instance, subdivide, OpnParams,
};
use crate::signature::Signature;
use crate::solvers::{
    annihilation, coverable, is_determinative, nonrepetitive_reachable_with_budget, reachable,
    SearchBudget,
};

use super::oracle;
use super::SuiteReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundtripSuite {
    /// Formula satisfiability vs. nonrepetitive reachability.
    Npr,
    /// Nonrepetitive vs. plain reachability across subdivisions, with the
    /// path-multiplicity audits on the witnesses.
    Subdivision,
    /// Reachability vs. unit-coverability after the shift.
    Pc,
    /// Hamiltonian path vs. annihilation.
    Hampath,
    /// Rooted reachability vs. the optimal-pebbling bound.
    Opn,
    /// The subdivided formula instance is determinative.
    GprDpr,
    All,
}

pub fn verify_reduction_roundtrips(
    suite: RoundtripSuite,
    seed: u64,
    budget: SearchBudget,
) -> SuiteReport {
    let mut report = SuiteReport::new(&format!("roundtrips-{suite:?}"));
    report.seed = Some(seed);
    match suite {
        RoundtripSuite::Npr => npr_suite(&mut report, budget),
        RoundtripSuite::Subdivision => subdivision_suite(&mut report, seed, budget),
        RoundtripSuite::Pc => pc_suite(&mut report, budget),
        RoundtripSuite::Hampath => hampath_suite(&mut report, budget),
        RoundtripSuite::Opn => opn_suite(&mut report, budget),
        RoundtripSuite::GprDpr => gpr_dpr_suite(&mut report, budget),
        RoundtripSuite::All => {
            for sub in [
                RoundtripSuite::Npr,
                RoundtripSuite::Subdivision,
                RoundtripSuite::Pc,
                RoundtripSuite::Hampath,
                RoundtripSuite::Opn,
                RoundtripSuite::GprDpr,
            ] {
                let sub_report = verify_reduction_roundtrips(sub, seed, budget);
                report.cases += sub_report.cases;
                report.budget_exhausted |= sub_report.budget_exhausted;
                for ce in sub_report.counterexamples {
                    report.fail(ce);
                }
                for note in sub_report.notes {
                    report.note(note);
                }
            }
        }
    }
    report
}

/// Every canonical formula with at most `max_vars` variables (all of them
/// appearing) and at most `max_clauses` clauses, up to variable renaming.
pub fn canonical_formulas(max_vars: usize, max_clauses: usize) -> Vec<QuantifiedCnf> {
    let mut out = Vec::new();
    for v in 1..=max_vars {
        // Clause universe over v variables: sizes 2-3, distinct variables.
        let mut universe: Vec<Vec<Lit>> = Vec::new();
        let vars: Vec<usize> = (0..v).collect();
        for a in 0..v {
            for b in (a + 1)..v {
                for mask in 0..4u32 {
                    universe.push(vec![
                        Lit { var: vars[a], positive: mask & 1 == 0 },
                        Lit { var: vars[b], positive: mask & 2 == 0 },
                    ]);
                }
                for c in (b + 1)..v {
                    for mask in 0..8u32 {
                        universe.push(vec![
                            Lit { var: vars[a], positive: mask & 1 == 0 },
                            Lit { var: vars[b], positive: mask & 2 == 0 },
                            Lit { var: vars[c], positive: mask & 4 == 0 },
                        ]);
                    }
                }
            }
        }
        universe.iter_mut().for_each(|c| c.sort());
        universe.sort();

        let mut chosen: Vec<usize> = Vec::new();
        let mut emitted: BTreeSet<Vec<Vec<Lit>>> = BTreeSet::new();
        enumerate_multisets(
            &universe,
            0,
            max_clauses,
            &mut chosen,
            &mut |clause_idx: &[usize]| {
                if clause_idx.len() < 2 {
                    return;
                }
                let clauses: Vec<Vec<Lit>> =
                    clause_idx.iter().map(|&i| universe[i].clone()).collect();
                let f = QuantifiedCnf::new(v, clauses);
                if f.appearing_vars().len() != v || !f.is_canonical() {
                    return;
                }
                // Keep a formula only when it is its own least renaming;
                // the least renaming is itself enumerated at some point.
                let me = sorted_clauses(&f);
                let rep = renaming_representative(&f, v);
                if me == rep && emitted.insert(rep) {
                    out.push(f);
                }
            },
        );
    }
    out
}

fn sorted_clauses(f: &QuantifiedCnf) -> Vec<Vec<Lit>> {
    let mut cs: Vec<Vec<Lit>> = f
        .clauses
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort();
            c
        })
        .collect();
    cs.sort();
    cs
}

fn renaming_representative(f: &QuantifiedCnf, v: usize) -> Vec<Vec<Lit>> {
    let mut perm: Vec<usize> = (0..v).collect();
    let mut best: Option<Vec<Vec<Lit>>> = None;
    permute(&mut perm, 0, &mut |p: &[usize]| {
        let renamed: Vec<Vec<Lit>> = f
            .clauses
            .iter()
            .map(|c| {
                let mut c: Vec<Lit> = c
                    .iter()
                    .map(|l| Lit {
                        var: p[l.var],
                        positive: l.positive,
                    })
                    .collect();
                c.sort();
                c
            })
            .collect();
        let mut renamed = renamed;
        renamed.sort();
        if best.as_ref().map_or(true, |b| renamed < *b) {
            best = Some(renamed);
        }
    });
    best.expect("at least the identity renaming")
}

fn permute(perm: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == perm.len() {
        f(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, f);
        perm.swap(k, i);
    }
}

fn enumerate_multisets(
    universe: &[Vec<Lit>],
    start: usize,
    room: usize,
    chosen: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    f(chosen);
    if room == 0 {
        return;
    }
    for i in start..universe.len() {
        chosen.push(i);
        enumerate_multisets(universe, i, room - 1, chosen, f);
        chosen.pop();
    }
}

fn npr_suite(report: &mut SuiteReport, budget: SearchBudget) {
    let mut formulas = canonical_formulas(4, 4);
    formulas.push(example_formula());
    report.note(format!("canonical formulas tested: {}", formulas.len()));
    for f in &formulas {
        report.cases += 1;
        let built = build_gnpr(f).expect("canonical");
        let inst = &built.instance;
        if inst.graph.max_degree() > 3 {
            report.fail(format!("formula graph exceeds degree 3: {f:?}"));
        }
        if inst.distribution.counts().iter().any(|&c| c > 2) {
            report.fail(format!("formula graph exceeds 2 pebbles: {f:?}"));
        }
        let sat = f.is_satisfiable();
        let rep = nonrepetitive_reachable_with_budget(
            &inst.graph,
            &inst.distribution,
            inst.target.expect("target"),
            budget,
        );
        if !rep.decided {
            report.budget_exhausted = true;
            continue;
        }
        if rep.answer != sat {
            report.fail(format!(
                "sat={sat} but nonrepetitive reach={} for {f:?}",
                rep.answer
            ));
        }
    }
}

fn subdivision_suite(report: &mut SuiteReport, seed: u64, budget: SearchBudget) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = 0;
    let mut true_cases = 0;
    let mut attempts = 0;
    while picked < 8 && attempts < 400 {
        attempts += 1;
        let n = rng.gen_range(3..=5usize);
        let e = rng.gen_range(2..=4usize);
        let mut edges = BTreeSet::new();
        while edges.len() < e {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                edges.insert((u.min(v), u.max(v)));
            }
        }
        let edge_list: Vec<(usize, usize)> = edges.into_iter().collect();
        let g = Graph::new(n, &edge_list).expect("valid");
        let total = rng.gen_range(2..=6);
        let p = oracle::random_distribution(&mut rng, n, total);
        let r = rng.gen_range(0..n);
        if p.count(r) > 0 {
            continue;
        }
        let nonrep = nonrepetitive_reachable_with_budget(&g, &p, r, budget);
        if !nonrep.decided {
            report.budget_exhausted = true;
            continue;
        }
        // Keep a mix of positive and negative instances.
        if nonrep.answer {
            if true_cases >= 5 {
                continue;
            }
            true_cases += 1;
        }
        picked += 1;
        report.cases += 1;

        let t = p.size().expect("size");
        let bound = f64::max((2.0 * t as f64).log2(), 4.0 * (g.edge_count() as f64).log2());
        let alpha = bound.ceil().max(1.0) as u32;
        let sub = subdivide(&g, &p, alpha);
        let reach = reachable(
            &sub.instance.graph,
            &sub.instance.distribution,
            r,
            1,
            budget,
        );
        if !reach.decided {
            report.budget_exhausted = true;
            continue;
        }
        if reach.answer != nonrep.answer {
            report.fail(format!(
                "subdivision mismatch: nonrep={} reach={} on n={n} e={} p={p} r={r} alpha={alpha}",
                nonrep.answer,
                reach.answer,
                g.edge_count()
            ));
        }
        if reach.answer {
            let witness = reach.witness.expect("witness on yes");
            audit_path_multiplicities(
                &sub.instance.distribution,
                &witness,
                &sub.path_of_edge,
                report,
            );
        }
    }
    if picked < 5 {
        report.fail(format!("only {picked} subdivision instances generated"));
    }
    report.note(format!(
        "subdivision round trips: {picked} instances ({true_cases} reachable)"
    ));
}

/// Path-multiplicity law on a witness over one-use paths (one pebble per
/// internal vertex): if the first arc off one end has multiplicity
/// `a0 >= 1`, the arc entering from the far end has multiplicity at least
/// `2^n (a0 - 1) + 1`; and when the far endpoint also pebbles onward, the
/// sink-deletion boost reaches `2^(n+1) (a0 - 1) + 2`.
fn audit_path_multiplicities(
    q: &PebbleDistribution,
    witness: &Signature,
    paths: &[Vec<usize>],
    report: &mut SuiteReport,
) {
    for path in paths {
        let n = path.len().saturating_sub(2) as u32;
        if n == 0 {
            continue;
        }
        for dir in 0..2 {
            let seq: Vec<usize> = if dir == 0 {
                path.clone()
            } else {
                path.iter().rev().copied().collect()
            };
            // seq[0] = v0, ..., seq[n+1] = far end.
            let a0 = witness.multiplicity(seq[1], seq[0]);
            if a0 < 1 {
                continue;
            }
            let needed = (1u64 << n) * (a0 - 1) + 1;
            let far = witness.multiplicity(seq[n as usize + 1], seq[n as usize]);
            if far < needed {
                report.fail(format!(
                    "path law violated: a0={a0} far={far} needed={needed}"
                ));
            }
            let far_end = seq[n as usize + 1];
            if witness.outdegree(far_end) > 0 {
                match boost_target(witness, q, far_end) {
                    Ok(boosted) => {
                        let want = 2 * ((1u64 << n) * (a0 - 1)) as i128 + 2;
                        if boosted.balance(q, far_end) < want {
                            report.fail(format!(
                                "boost after path law too weak: got {} want {want}",
                                boosted.balance(q, far_end)
                            ));
                        }
                    }
                    Err(e) => report.fail(format!("boost on witness failed: {e}")),
                }
            }
        }
    }
}

fn pc_suite(report: &mut SuiteReport, budget: SearchBudget) {
    for n in 1..=4usize {
        for g in oracle::all_graphs(n) {
            let order: Vec<usize> = (0..n).collect();
            for total in 0..=6u64 {
                let mut iter = crate::numbers::Compositions::new(&order, total);
                while let Some(counts) = iter.next() {
                    let p = PebbleDistribution::new(counts.to_vec());
                    for r in 0..n {
                        report.cases += 1;
                        let inst = build_pc_instance(&g, &p, r);
                        let reach = reachable(&g, &p, r, 1, budget);
                        let cover = coverable(
                            &g,
                            &inst.distribution,
                            &PebbleDistribution::unit(n),
                            budget,
                        );
                        if !(reach.decided && cover.decided) {
                            report.budget_exhausted = true;
                            continue;
                        }
                        if reach.answer != cover.answer {
                            report.fail(format!(
                                "pc mismatch on n={n} edges={:?} p={p} r={r}: reach={} cover={}",
                                g.edges().collect::<Vec<_>>(),
                                reach.answer,
                                cover.answer
                            ));
                        }
                    }
                }
            }
        }
    }
}

fn hampath_suite(report: &mut SuiteReport, budget: SearchBudget) {
    // All connected graphs up to 5 vertices, plus every graph (connected
    // or not) up to 3 vertices for the degenerate shapes.
    let mut graphs: Vec<Graph> = Vec::new();
    for n in 1..=5 {
        graphs.extend(oracle::connected_graphs(n));
    }
    for n in 2..=3 {
        graphs.extend(oracle::all_graphs(n).into_iter().filter(|g| !g.is_connected()));
    }
    for g in &graphs {
        report.cases += 1;
        let inst = build_annihilation_from_hampath(g);
        let ham = oracle::hamiltonian_path_exists(g);
        let ann = annihilation(&inst.graph, &inst.distribution, budget);
        if !ann.decided {
            report.budget_exhausted = true;
            continue;
        }
        if ann.answer != ham {
            report.fail(format!(
                "hampath mismatch on n={} edges={:?}: ham={ham} ann={}",
                g.vertex_count(),
                g.edges().collect::<Vec<_>>(),
                ann.answer
            ));
        }
        if ann.answer {
            let w = ann.witness.expect("witness");
            let total = inst.distribution.size().unwrap();
            if w.total_multiplicity() != total - 1 {
                report.fail("annihilation witness has wrong move count".to_string());
            }
        }
    }
    report.note(format!("hampath instances: {}", graphs.len()));
}

fn opn_suite(report: &mut SuiteReport, budget: SearchBudget) {
    // Bidirectional checks at |p| = 1 with a small conforming override
    // satisfying both star-lemma-side requirements (2(m^2+1) < 2^alpha and
    // beta - 1 > m 2^alpha), so the optimal-pebbling side stays within
    // brute-force reach.
    let params = OpnParams {
        alpha: Some(3),
        beta: Some(10),
    };
    let cases: [(Graph, Vec<u64>, usize); 2] = [
        (Graph::new(1, &[]).unwrap(), vec![1], 0),
        (Graph::complete(2), vec![1, 0], 1),
    ];
    for (g, counts, r) in cases {
        report.cases += 1;
        let p = PebbleDistribution::new(counts);
        let det = is_determinative(&g, &p, r, budget);
        if !(det.decided && det.answer) {
            report.fail("intermediate instance is not determinative".to_string());
            continue;
        }
        let inst = build_opn_instance(&g, &p, r, params).expect("valid");
        let reach = reachable(&g, &p, r, 1, budget);
        match pi_hat_le(&inst.instance.graph, inst.k, budget) {
            Err(e) => {
                report.fail(format!("optimal-pebbling enumeration failed: {e}"));
                report.budget_exhausted = true;
            }
            Ok(witness) => {
                if witness.is_some() != reach.answer {
                    report.fail(format!(
                        "opn mismatch: reach={} pi_hat<=k={}",
                        reach.answer,
                        witness.is_some()
                    ));
                }
            }
        }
    }

    // Forward-direction check at |p| = 2 with fully conforming parameters:
    // the center-loaded distribution reaches every vertex.
    report.cases += 1;
    let g = Graph::complete(2);
    let p = PebbleDistribution::new(vec![2, 0]);
    let inst = build_opn_instance(&g, &p, 1, OpnParams::default()).expect("valid");
    let h = &inst.instance.graph;
    let mut q = PebbleDistribution::zeros(h.vertex_count());
    for &center in &inst.star_centers {
        q.set(center, 1u64 << inst.alpha);
    }
    debug_assert_eq!(q.size().unwrap(), inst.k);
    for v in 0..h.vertex_count() {
        if q.count(v) > 0 {
            continue;
        }
        let rep = reachable(h, &q, v, 1, budget);
        if !rep.decided {
            report.budget_exhausted = true;
            break;
        }
        if !rep.answer {
            report.fail(format!(
                "conforming witness distribution misses vertex {v} ({})",
                inst.instance.labels[v]
            ));
            break;
        }
    }
    report.note(format!(
        "conforming forward case: n(H)={} k={}",
        h.vertex_count(),
        inst.k
    ));
}

fn gpr_dpr_suite(report: &mut SuiteReport, budget: SearchBudget) {
    // A satisfiable canonical formula: its subdivided instance must be
    // determinative, with the conforming odd stretch.
    let f = QuantifiedCnf::new(
        2,
        vec![
            vec![Lit::pos(0), Lit::pos(1)],
            vec![Lit::neg(0), Lit::neg(1)],
        ],
    );
    report.cases += 1;
    let gpr = build_gpr(&f, None).expect("canonical");
    let inst = &gpr.instance;
    if !inst.conforming || gpr.alpha % 2 != 1 {
        report.fail("conforming stretch must be odd".to_string());
    }
    if inst.graph.bipartition().is_none() {
        report.fail("subdivided instance is not bipartite".to_string());
    }
    let det = is_determinative(
        &inst.graph,
        &inst.distribution,
        inst.target.expect("target"),
        budget,
    );
    if !det.decided {
        report.budget_exhausted = true;
    } else if !det.answer {
        report.fail("subdivided satisfiable instance is not determinative".to_string());
    }
    report.note(format!(
        "determinative check on {} vertices (alpha={})",
        inst.graph.vertex_count(),
        gpr.alpha
    ));
    // Fresh witnesses from the solver replay and normalize correctly.
    let reach = reachable(
        &inst.graph,
        &inst.distribution,
        inst.target.unwrap(),
        1,
        budget,
    );
    if reach.decided && reach.answer {
        let w = reach.witness.expect("witness");
        let seq = crate::orderability::extract_ordering(&w, &inst.distribution)
            .expect("witness orderable");
        if signature_of(&seq) != w {
            report.fail("witness ordering does not round-trip".to_string());
        }
    } else {
        report.budget_exhausted |= !reach.decided;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_generation_small() {
        let fs = canonical_formulas(2, 2);
        // Over {x, y} with the canonical occurrence pattern the options are
        // severely limited; all must actually be canonical and distinct up
        // to renaming.
        assert!(!fs.is_empty());
        for f in &fs {
            assert!(f.is_canonical());
            assert_eq!(f.appearing_vars().len(), 2);
        }
    }

    #[test]
    fn pc_roundtrip_small() {
        let report = verify_reduction_roundtrips(
            RoundtripSuite::Pc,
            7,
            SearchBudget::default(),
        );
        assert!(report.ok(), "{:?}", report.counterexamples);
    }

    #[test]
    fn hampath_roundtrip() {
        let report = verify_reduction_roundtrips(
            RoundtripSuite::Hampath,
            7,
            SearchBudget::default(),
        );
        assert!(report.ok(), "{:?}", report.counterexamples);
    }
}
