//! Annihilation: can pebbling reduce the whole graph to a single pebble?
//! Pure distribution-space search; no weight prune applies because the goal
//! is to destroy pebbles, not to deliver them.

use std::collections::HashSet;

use crate::distribution::PebbleDistribution;
use crate::graph::Graph;
use crate::orderability::is_orderable;
use crate::signature::Signature;

use super::{BudgetMeter, ReachReport, SearchBudget};

pub fn annihilation(g: &Graph, p: &PebbleDistribution, budget: SearchBudget) -> ReachReport {
    p.validate_for(g).expect("distribution length mismatch");
    let total = p.size().expect("distribution size");
    assert!(total >= 1, "annihilation needs at least one pebble");

    if total == 1 {
        return ReachReport::yes(Signature::new(), 0);
    }

    let mut search = AnnihilateSearch {
        g,
        seen: HashSet::new(),
        meter: BudgetMeter::new(budget),
    };
    let mut counts = p.counts().to_vec();
    let mut path = Vec::new();
    match search.dfs(&mut counts, total, &mut path) {
        None => ReachReport::undecided(search.meter.states),
        Some(false) => ReachReport::no(search.meter.states),
        Some(true) => {
            // The raw signature has total multiplicity |p| - 1; stripping
            // cycles would change how many pebbles survive, so keep it.
            let mut sig = Signature::new();
            for &(u, v) in &path {
                sig.add_arc(u, v, 1).expect("moves are loop-free");
            }
            debug_assert_eq!(sig.total_multiplicity(), total - 1);
            debug_assert!(is_orderable(&sig, p).orderable);
            ReachReport::yes(sig, search.meter.states)
        }
    }
}

struct AnnihilateSearch<'a> {
    g: &'a Graph,
    seen: HashSet<Vec<u32>>,
    meter: BudgetMeter,
}

impl<'a> AnnihilateSearch<'a> {
    fn dfs(
        &mut self,
        counts: &mut Vec<u64>,
        total: u64,
        path: &mut Vec<(usize, usize)>,
    ) -> Option<bool> {
        if total == 1 {
            return Some(true);
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
                match self.dfs(counts, total - 1, path) {
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
    fn single_pebble_is_already_annihilated() {
        let g = Graph::path(2);
        let rep = annihilation(&g, &dist(&[1, 0]), SearchBudget::default());
        assert!(rep.decided && rep.answer);
        assert!(rep.witness.unwrap().is_empty());
    }

    #[test]
    fn one_move_annihilation_on_k2() {
        let g = Graph::complete(2);
        let rep = annihilation(&g, &dist(&[2, 0]), SearchBudget::default());
        assert!(rep.decided && rep.answer);
        assert_eq!(rep.witness.unwrap().total_multiplicity(), 1);
    }

    #[test]
    fn isolated_vertex_cannot_annihilate() {
        let g = Graph::new(1, &[]).unwrap();
        let rep = annihilation(&g, &dist(&[3]), SearchBudget::default());
        assert!(rep.decided && !rep.answer);
    }
}
