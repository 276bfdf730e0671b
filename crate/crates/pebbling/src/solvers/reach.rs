//! Exact k-pebble reachability by memoized depth-first search over the
//! distribution space, with weight pruning.
//!
//! Each move burns a pebble, so the space is finite and acyclic. A state
//! whose weight toward the target drops below `k` can never place `k`
//! pebbles there (no move increases the weight), so pruning on the scaled
//! weight is sound and the search stays exact.

use std::collections::HashSet;

use crate::distribution::PebbleDistribution;
use crate::graph::Graph;
use crate::orderability::{check_minimum_signature, is_acyclic, is_orderable};
use crate::signature::Signature;
use crate::weight::ScaledWeights;

use super::fold::FoldedInstance;
use super::{BudgetMeter, ReachReport, SearchBudget};

/// Decides whether some sequence of pebbling moves places at least `k`
/// pebbles on `r`. A positive answer carries a witness signature normalized
/// to the minimum-signature form.
pub fn reachable(
    g: &Graph,
    p: &PebbleDistribution,
    r: usize,
    k: u64,
    budget: SearchBudget,
) -> ReachReport {
    assert!(r < g.vertex_count(), "target out of range");
    assert!(k >= 1, "k must be positive");
    p.validate_for(g).expect("distribution length mismatch");

    if p.count(r) >= k {
        return ReachReport::yes(Signature::new(), 0);
    }

    let folded = FoldedInstance::fold(g, p, &[r]);
    let core_r = folded.core_of[r].expect("kept vertex survives folding");
    let mut search = DistSearch::new(&folded.graph, core_r, k, budget);
    let mut counts = folded.counts.clone();
    let mut path = Vec::new();
    match search.dfs(&mut counts, &mut path) {
        None => ReachReport::undecided(search.meter.states),
        Some(false) => ReachReport::no(search.meter.states),
        Some(true) => {
            let mut core_sig = Signature::new();
            for &(u, v) in &path {
                core_sig.add_arc(u, v, 1).expect("moves are loop-free");
            }
            let lifted = folded.lift_signature(&core_sig);
            let witness = normalize_witness(lifted, p, r, k);
            debug_assert!(is_orderable(&witness, p).orderable);
            debug_assert!(
                p.count(r) > k || check_minimum_signature(&witness, p, r, k),
                "witness must pass the minimum-signature checks"
            );
            ReachReport::yes(witness, search.meter.states)
        }
    }
}

struct DistSearch<'a> {
    g: &'a Graph,
    target: usize,
    k: u64,
    weights: ScaledWeights,
    threshold: u128,
    seen: HashSet<Vec<u32>>,
    meter: BudgetMeter,
}

impl<'a> DistSearch<'a> {
    fn new(g: &'a Graph, target: usize, k: u64, budget: SearchBudget) -> DistSearch<'a> {
        let weights = ScaledWeights::toward(g, target);
        let threshold = weights.threshold(k);
        DistSearch {
            g,
            target,
            k,
            weights,
            threshold,
            seen: HashSet::new(),
            meter: BudgetMeter::new(budget),
        }
    }

    fn key(counts: &[u64]) -> Vec<u32> {
        counts
            .iter()
            .map(|&c| u32::try_from(c).expect("desk-scale pebble counts fit in u32"))
            .collect()
    }

    /// `Some(true)` = target hit along `path`; `None` = budget exhausted.
    fn dfs(&mut self, counts: &mut Vec<u64>, path: &mut Vec<(usize, usize)>) -> Option<bool> {
        if counts[self.target] >= self.k {
            return Some(true);
        }
        if self.weights.of_counts(counts) < self.threshold {
            return Some(false);
        }
        if !self.seen.insert(Self::key(counts)) {
            return Some(false);
        }
        if !self.meter.tick() {
            return None;
        }
        for u in 0..counts.len() {
            if counts[u] < 2 {
                continue;
            }
            for &v in self.g.neighbors(u) {
                counts[u] -= 2;
                counts[v] += 1;
                path.push((u, v));
                match self.dfs(counts, path) {
                    Some(true) => return Some(true),
                    Some(false) => {}
                    None => return None,
                }
                path.pop();
                counts[v] -= 1;
                counts[u] += 2;
            }
        }
        Some(false)
    }
}

/// Turns any signature that places at least `k` pebbles on `r` (with
/// non-negative balances elsewhere) into the minimum-signature normal form:
/// strip cycles, delete arcs into sinks other than `r`, and trim excess
/// arcs into `r`.
pub(crate) fn normalize_witness(
    sig: Signature,
    p: &PebbleDistribution,
    r: usize,
    k: u64,
) -> Signature {
    let mut d = strip_support_cycles(sig);
    let want_in = k.saturating_sub(p.count(r));
    loop {
        // Delete arcs into sinks other than r (this also erodes any
        // out-arcs of r, since they must lead to such sinks eventually).
        let next = d
            .arcs()
            .map(|(a, _)| a)
            .find(|&(_, v)| v != r && d.outdegree(v) == 0);
        if let Some((u, v)) = next {
            let m = d.multiplicity(u, v);
            d.remove_arc(u, v, m);
            continue;
        }
        let indeg = d.indegree(r);
        if indeg > want_in {
            let (u, _) = d
                .arcs()
                .map(|(a, _)| a)
                .find(|&(_, v)| v == r)
                .expect("positive indegree at r");
            d.remove_arc(u, r, 1);
            continue;
        }
        debug_assert!(is_acyclic(&d));
        return d;
    }
}

/// Removes directed cycles from an arbitrary signature. Balances never
/// drop, so balance-feasibility is preserved.
pub(crate) fn strip_support_cycles(mut d: Signature) -> Signature {
    loop {
        let n = d.min_vertex_count();
        let mut adj = vec![Vec::new(); n];
        for ((u, v), _) in d.arcs() {
            adj[u].push(v);
        }
        match find_cycle(&adj) {
            None => return d,
            Some(cycle) => {
                let m = cycle
                    .iter()
                    .map(|&(u, v)| d.multiplicity(u, v))
                    .min()
                    .expect("cycle is nonempty");
                for (u, v) in cycle {
                    d.remove_arc(u, v, m);
                }
            }
        }
    }
}

fn find_cycle(adj: &[Vec<usize>]) -> Option<Vec<(usize, usize)>> {
    let n = adj.len();
    let mut color = vec![0u8; n];
    let mut parent: Vec<usize> = vec![usize::MAX; n];
    for start in 0..n {
        if color[start] != 0 {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(start, 0)];
        color[start] = 1;
        while let Some(&mut (v, ref mut ci)) = call.last_mut() {
            if *ci < adj[v].len() {
                let w = adj[v][*ci];
                *ci += 1;
                if color[w] == 0 {
                    color[w] = 1;
                    parent[w] = v;
                    call.push((w, 0));
                } else if color[w] == 1 {
                    let mut cycle = vec![(v, w)];
                    let mut x = v;
                    while x != w {
                        cycle.push((parent[x], x));
                        x = parent[x];
                    }
                    cycle.reverse();
                    return Some(cycle);
                }
            } else {
                color[v] = 2;
                call.pop();
            }
        }
    }
    None
}

/// Outcome of a yes/no question that may exhaust its budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecisionReport {
    pub decided: bool,
    pub answer: bool,
    pub states_explored: u64,
}

/// A vertex is determinative when its reachability implies everyone's:
/// either `r` is unreachable, or every vertex is reachable.
pub fn is_determinative(
    g: &Graph,
    p: &PebbleDistribution,
    r: usize,
    budget: SearchBudget,
) -> DecisionReport {
    let first = reachable(g, p, r, 1, budget);
    let mut states = first.states_explored;
    if !first.decided {
        return DecisionReport {
            decided: false,
            answer: false,
            states_explored: states,
        };
    }
    if !first.answer {
        return DecisionReport {
            decided: true,
            answer: true,
            states_explored: states,
        };
    }
    for v in 0..g.vertex_count() {
        let rep = reachable(g, p, v, 1, budget);
        states += rep.states_explored;
        if !rep.decided {
            return DecisionReport {
                decided: false,
                answer: false,
                states_explored: states,
            };
        }
        if !rep.answer {
            return DecisionReport {
                decided: true,
                answer: false,
                states_explored: states,
            };
        }
    }
    DecisionReport {
        decided: true,
        answer: true,
        states_explored: states,
    }
}

/// Exact maximum number of pebbles placeable on `r`, by exhaustive memoized
/// search with an incumbent-driven weight cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaxPebblesReport {
    pub decided: bool,
    pub maximum: u64,
    pub states_explored: u64,
}

pub fn max_pebbles(
    g: &Graph,
    p: &PebbleDistribution,
    r: usize,
    budget: SearchBudget,
) -> MaxPebblesReport {
    assert!(r < g.vertex_count(), "target out of range");
    p.validate_for(g).expect("distribution length mismatch");
    let folded = FoldedInstance::fold(g, p, &[r]);
    let core_r = folded.core_of[r].expect("kept vertex survives folding");
    let weights = ScaledWeights::toward(&folded.graph, core_r);
    let mut best = 0u64;
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut meter = BudgetMeter::new(budget);
    let mut counts = folded.counts.clone();
    max_dfs(
        &folded.graph,
        core_r,
        &weights,
        &mut counts,
        &mut best,
        &mut seen,
        &mut meter,
    );
    MaxPebblesReport {
        decided: !meter.exceeded(),
        maximum: best,
        states_explored: meter.states,
    }
}

fn max_dfs(
    g: &Graph,
    target: usize,
    weights: &ScaledWeights,
    counts: &mut Vec<u64>,
    best: &mut u64,
    seen: &mut HashSet<Vec<u32>>,
    meter: &mut BudgetMeter,
) {
    if counts[target] > *best {
        *best = counts[target];
    }
    if weights.of_counts(counts) < weights.threshold(*best + 1) {
        return;
    }
    if !seen.insert(DistSearch::key(counts)) {
        return;
    }
    if !meter.tick() {
        return;
    }
    for u in 0..counts.len() {
        if counts[u] < 2 {
            continue;
        }
        for &v in g.neighbors(u) {
            counts[u] -= 2;
            counts[v] += 1;
            max_dfs(g, target, weights, counts, best, seen, meter);
            counts[v] -= 1;
            counts[u] += 2;
            if meter.exceeded() {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(counts: &[u64]) -> PebbleDistribution {
        PebbleDistribution::new(counts.to_vec())
    }

    #[test]
    fn reach_examples_on_paths() {
        let g = Graph::path(3);
        let rep = reachable(&g, &dist(&[4, 0, 0]), 2, 1, SearchBudget::default());
        assert!(rep.decided && rep.answer);
        let w = rep.witness.unwrap();
        assert!(check_minimum_signature(&w, &dist(&[4, 0, 0]), 2, 1));

        let rep = reachable(&g, &dist(&[3, 0, 0]), 2, 1, SearchBudget::default());
        assert!(rep.decided && !rep.answer);
    }

    #[test]
    fn trivially_reachable_with_pebbles_in_place() {
        let g = Graph::path(3);
        let rep = reachable(&g, &dist(&[0, 0, 2]), 2, 2, SearchBudget::default());
        assert!(rep.decided && rep.answer);
        assert!(rep.witness.unwrap().is_empty());
    }

    #[test]
    fn k_pebble_reachability() {
        let g = Graph::path(3);
        // 8 pebbles two steps away yield exactly 2 on the target.
        let rep = reachable(&g, &dist(&[8, 0, 0]), 2, 2, SearchBudget::default());
        assert!(rep.decided && rep.answer);
        let w = rep.witness.unwrap();
        assert!(check_minimum_signature(&w, &dist(&[8, 0, 0]), 2, 2));
        let rep = reachable(&g, &dist(&[7, 0, 0]), 2, 2, SearchBudget::default());
        assert!(rep.decided && !rep.answer);
    }

    #[test]
    fn budget_exhaustion_is_reported_not_false() {
        let g = Graph::complete(4);
        let p = dist(&[9, 9, 9, 0]);
        let rep = reachable(&g, &p, 3, 5, SearchBudget::new(3, 60.0));
        assert!(!rep.decided);
        assert!(!rep.answer);
    }

    #[test]
    fn determinative_examples() {
        let g = Graph::path(3);
        // Everything pebbled: every vertex trivially reachable.
        let rep = is_determinative(&g, &dist(&[1, 1, 1]), 2, SearchBudget::default());
        assert!(rep.decided && rep.answer);
        // Target unreachable: vacuously determinative.
        let rep = is_determinative(&g, &dist(&[3, 0, 0]), 2, SearchBudget::default());
        assert!(rep.decided && rep.answer);
        // Target reachable but the far end is not.
        let rep = is_determinative(&g, &dist(&[2, 0, 0]), 1, SearchBudget::default());
        assert!(rep.decided && !rep.answer);
    }

    #[test]
    fn max_pebbles_on_a_path() {
        let g = Graph::path(3);
        let rep = max_pebbles(&g, &dist(&[9, 1, 0]), 2, SearchBudget::default());
        assert!(rep.decided);
        // floor((1 + floor(9/2))/2) = 2
        assert_eq!(rep.maximum, 2);
    }
}
