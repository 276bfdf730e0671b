//! Star-lemma certification: among all distributions of `beta * 2^alpha`
//! pebbles on the stretched star, exactly one lets every leaf receive
//! `2^alpha` pebbles, namely `2^alpha` sitting on each leaf. Candidates are
//! pre-filtered with the per-leaf weight inequality (sound: weight never
//! increases), then settled by the exact solver.

use crate::distribution::PebbleDistribution;
use crate::reductions::{build_star, StarGraph};
use crate::solvers::{reachable, SearchBudget};
use crate::weight::ScaledWeights;

use super::SuiteReport;

struct Ctx<'a> {
    star: &'a StarGraph,
    weights: &'a [ScaledWeights],
    thresholds: &'a [u128],
    suffix_max: &'a [Vec<u128>],
    order: &'a [usize],
    per_leaf: u64,
    budget: SearchBudget,
}

pub fn verify_star_lemma(alpha: u32, beta: u32, budget: SearchBudget) -> SuiteReport {
    let mut report = SuiteReport::new("star");
    let b2 = beta as u64 * beta as u64;
    if 2 * (b2 + 1) >= (1u64 << alpha) {
        report.fail(format!(
            "hypothesis 2(beta^2+1) < 2^alpha fails for alpha={alpha}, beta={beta}"
        ));
        return report;
    }
    let star = build_star(alpha, beta).expect("valid star");
    let n = star.graph.vertex_count();
    let total = (beta as u64) << alpha;
    let per_leaf = 1u64 << alpha;

    let weights: Vec<ScaledWeights> = star
        .leaves
        .iter()
        .map(|&l| ScaledWeights::toward(&star.graph, l))
        .collect();
    let thresholds: Vec<u128> = weights.iter().map(|w| w.threshold(per_leaf)).collect();

    // Assign heavy-weight vertices first so the filter binds early.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| {
        std::cmp::Reverse(weights.iter().map(|w| w.per_vertex[v]).max().unwrap())
    });
    let suffix_max: Vec<Vec<u128>> = weights
        .iter()
        .map(|w| {
            let mut sm = vec![0u128; n + 1];
            for i in (0..n).rev() {
                sm[i] = sm[i + 1].max(w.per_vertex[order[i]]);
            }
            sm
        })
        .collect();

    let mut survivors: Vec<PebbleDistribution> = Vec::new();
    let mut counts = vec![0u64; n];
    let mut acc = vec![0u128; weights.len()];
    let ctx = Ctx {
        star: &star,
        weights: &weights,
        thresholds: &thresholds,
        suffix_max: &suffix_max,
        order: &order,
        per_leaf,
        budget,
    };
    place(&ctx, 0, total, &mut counts, &mut acc, &mut survivors, &mut report);

    // Exactly one survivor: the canonical distribution on the leaves.
    let mut canonical = PebbleDistribution::zeros(n);
    for &l in &star.leaves {
        canonical.set(l, per_leaf);
    }
    if survivors.len() != 1 {
        report.fail(format!(
            "expected exactly one surviving distribution, found {}",
            survivors.len()
        ));
    } else if survivors[0] != canonical {
        report.fail(format!(
            "survivor {} is not the leaf-loaded form",
            survivors[0]
        ));
    }

    // The canonical distribution itself passes every exact check.
    for &leaf in &star.leaves {
        let rep = reachable(&star.graph, &canonical, leaf, per_leaf, budget);
        if !(rep.decided && rep.answer) {
            report.fail(format!("canonical distribution fails at leaf {leaf}"));
        }
    }

    // Perturbation: moving one pebble off a leaf breaks that leaf's weight
    // inequality.
    for (li, &l) in star.leaves.iter().enumerate() {
        let mut moved = canonical.clone();
        moved.sub(l, 1).unwrap();
        moved.add(star.center, 1).unwrap();
        let w = weights[li].of_counts(moved.counts());
        if w >= thresholds[li] {
            report.fail(format!(
                "perturbed distribution still weight-feasible at leaf {l}"
            ));
        }
    }

    report.note(format!(
        "alpha={alpha} beta={beta}: {} candidate nodes explored",
        report.cases
    ));
    report
}

#[allow(clippy::too_many_arguments)]
fn place(
    ctx: &Ctx,
    idx: usize,
    remaining: u64,
    counts: &mut Vec<u64>,
    acc: &mut Vec<u128>,
    survivors: &mut Vec<PebbleDistribution>,
    report: &mut SuiteReport,
) {
    report.cases += 1;
    for (t, threshold) in ctx.thresholds.iter().enumerate() {
        if acc[t] + remaining as u128 * ctx.suffix_max[t][idx] < *threshold {
            return;
        }
    }
    if idx == ctx.order.len() {
        debug_assert_eq!(remaining, 0);
        // Weight-feasible candidate: settle each leaf exactly.
        let p = PebbleDistribution::new(counts.clone());
        for &leaf in &ctx.star.leaves {
            let rep = reachable(&ctx.star.graph, &p, leaf, ctx.per_leaf, ctx.budget);
            if !rep.decided {
                report.budget_exhausted = true;
                return;
            }
            if !rep.answer {
                return;
            }
        }
        if survivors.len() < 8 {
            survivors.push(p);
        }
        return;
    }
    let v = ctx.order[idx];
    let bottom = if idx == ctx.order.len() - 1 {
        remaining
    } else {
        0
    };
    for c in (bottom..=remaining).rev() {
        counts[v] = c;
        for (t, w) in ctx.weights.iter().enumerate() {
            acc[t] += c as u128 * w.per_vertex[v];
        }
        place(ctx, idx + 1, remaining - c, counts, acc, survivors, report);
        for (t, w) in ctx.weights.iter().enumerate() {
            acc[t] -= c as u128 * w.per_vertex[v];
        }
        counts[v] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_lemma_at_4_2() {
        let report = verify_star_lemma(4, 2, SearchBudget::default());
        assert!(report.ok(), "{:?}", report.counterexamples);
    }

    #[test]
    fn hypothesis_violation_is_reported() {
        let report = verify_star_lemma(3, 2, SearchBudget::default());
        assert!(!report.ok());
    }
}
