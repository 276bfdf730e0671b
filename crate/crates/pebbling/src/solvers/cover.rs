//! Exact coverability: does some sequence turn `p` into a distribution that
//! dominates `q`? Same memoized distribution search as reachability, with a
//! weight prune per covered target.

use std::collections::HashSet;

use crate::distribution::PebbleDistribution;
use crate::graph::Graph;
use crate::orderability::is_orderable;
use crate::signature::Signature;
use crate::weight::ScaledWeights;

use super::reach::strip_support_cycles;
use super::{BudgetMeter, ReachReport, SearchBudget};

pub fn coverable(
    g: &Graph,
    p: &PebbleDistribution,
    q: &PebbleDistribution,
    budget: SearchBudget,
) -> ReachReport {
    p.validate_for(g).expect("distribution length mismatch");
    q.validate_for(g).expect("target length mismatch");
    assert!(q.size().expect("target size") >= 1, "cover target is empty");

    if p.dominates(q) {
        return ReachReport::yes(Signature::new(), 0);
    }

    // One weight bound per vertex that must end up covered.
    let targets: Vec<(usize, u64, ScaledWeights)> = (0..g.vertex_count())
        .filter(|&v| q.count(v) > 0)
        .map(|v| (v, q.count(v), ScaledWeights::toward(g, v)))
        .collect();

    let mut search = CoverSearch {
        g,
        q,
        targets: &targets,
        seen: HashSet::new(),
        meter: BudgetMeter::new(budget),
    };
    let mut counts = p.counts().to_vec();
    let mut path = Vec::new();
    match search.dfs(&mut counts, &mut path) {
        None => ReachReport::undecided(search.meter.states),
        Some(false) => ReachReport::no(search.meter.states),
        Some(true) => {
            let mut sig = Signature::new();
            for &(u, v) in &path {
                sig.add_arc(u, v, 1).expect("moves are loop-free");
            }
            // A minimum cover witness is acyclic; stripping cycles only
            // raises final counts, so domination is preserved.
            let witness = strip_support_cycles(sig);
            debug_assert!(is_orderable(&witness, p).orderable);
            ReachReport::yes(witness, search.meter.states)
        }
    }
}

struct CoverSearch<'a> {
    g: &'a Graph,
    q: &'a PebbleDistribution,
    targets: &'a [(usize, u64, ScaledWeights)],
    seen: HashSet<Vec<u32>>,
    meter: BudgetMeter,
}

impl<'a> CoverSearch<'a> {
    fn covered(&self, counts: &[u64]) -> bool {
        counts
            .iter()
            .zip(self.q.counts())
            .all(|(&have, &want)| have >= want)
    }

    fn feasible(&self, counts: &[u64]) -> bool {
        self.targets
            .iter()
            .all(|(_, want, w)| w.of_counts(counts) >= w.threshold(*want))
    }

    fn dfs(&mut self, counts: &mut Vec<u64>, path: &mut Vec<(usize, usize)>) -> Option<bool> {
        if self.covered(counts) {
            return Some(true);
        }
        if !self.feasible(counts) {
            return Some(false);
        }
        let key: Vec<u32> = counts
            .iter()
            .map(|&c| u32::try_from(c).expect("desk-scale counts fit in u32"))
            .collect();
        if !self.seen.insert(key) {
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

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(counts: &[u64]) -> PebbleDistribution {
        PebbleDistribution::new(counts.to_vec())
    }

    #[test]
    fn cover_examples_on_k2() {
        let g = Graph::complete(2);
        let unit = PebbleDistribution::unit(2);
        let rep = coverable(&g, &dist(&[3, 0]), &unit, SearchBudget::default());
        assert!(rep.decided && rep.answer);
        let rep = coverable(&g, &dist(&[2, 0]), &unit, SearchBudget::default());
        assert!(rep.decided && !rep.answer);
    }

    #[test]
    fn dominating_distribution_covers_with_empty_witness() {
        let g = Graph::path(3);
        let rep = coverable(
            &g,
            &dist(&[1, 2, 1]),
            &PebbleDistribution::unit(3),
            SearchBudget::default(),
        );
        assert!(rep.decided && rep.answer);
        assert!(rep.witness.unwrap().is_empty());
    }
}
