//! Nonrepetitive reachability: is there a sequence placing a pebble on `r`
//! that pebbles each unordered vertex pair at most once?
//!
//! Search space: each edge of the target's component is unused or oriented
//! one way. An orientation with non-negative balances everywhere and
//! balance >= 1 at `r` yields a legal nonrepetitive sequence after cycle
//! stripping, so the leaf test is pure balance feasibility. Branches die as
//! soon as some vertex can no longer balance even if every undecided
//! incident edge turns inward; subtrees are deduplicated on the (in, out)
//! profile of the vertices straddling the decision frontier.

use std::collections::HashSet;

use crate::distribution::PebbleDistribution;
use crate::graph::Graph;
use crate::orderability::is_orderable;
use crate::signature::Signature;

use super::reach::strip_support_cycles;
use super::{BudgetMeter, SearchBudget};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonrepReport {
    pub decided: bool,
    pub answer: bool,
    pub witness: Option<Signature>,
    pub states_explored: u64,
}

pub fn nonrepetitive_reachable(g: &Graph, p: &PebbleDistribution, r: usize) -> NonrepReport {
    nonrepetitive_reachable_with_budget(g, p, r, SearchBudget::default())
}

pub fn nonrepetitive_reachable_with_budget(
    g: &Graph,
    p: &PebbleDistribution,
    r: usize,
    budget: SearchBudget,
) -> NonrepReport {
    assert!(r < g.vertex_count(), "target out of range");
    p.validate_for(g).expect("distribution length mismatch");

    if p.count(r) >= 1 {
        return NonrepReport {
            decided: true,
            answer: true,
            witness: Some(Signature::new()),
            states_explored: 0,
        };
    }

    let dist = g.distances_from(r);
    // Only edges in r's component can matter; sort them nearest-r first so
    // vertices settle shortly after they are first touched.
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .filter(|&(u, v)| dist[u].is_some() && dist[v].is_some())
        .collect();
    edges.sort_by_key(|&(u, v)| {
        let du = dist[u].unwrap();
        let dv = dist[v].unwrap();
        (du.min(dv), du.max(dv), u, v)
    });

    let n = g.vertex_count();
    let mut undecided = vec![0u32; n];
    let mut first_edge = vec![usize::MAX; n];
    let mut last_edge = vec![0usize; n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        for w in [u, v] {
            undecided[w] += 1;
            first_edge[w] = first_edge[w].min(i);
            last_edge[w] = last_edge[w].max(i);
        }
    }
    // Vertices straddling the frontier at each depth (static in the edge
    // order, independent of choices).
    let active_at: Vec<Vec<usize>> = (0..=edges.len())
        .map(|i| {
            (0..n)
                .filter(|&v| first_edge[v] < i && i <= last_edge[v])
                .collect()
        })
        .collect();

    let mut search = NonrepSearch {
        edges: &edges,
        dist: &dist,
        req: {
            let mut req = vec![0i64; n];
            req[r] = 1;
            req
        },
        p: p.counts(),
        in_cnt: vec![0i64; n],
        out_cnt: vec![0i64; n],
        undecided,
        active_at: &active_at,
        choice: vec![Choice::Unused; edges.len()],
        failed: HashSet::new(),
        meter: BudgetMeter::new(budget),
    };

    // The target must be able to end with a pebble at all.
    if !search.potential_ok(r) {
        return NonrepReport {
            decided: true,
            answer: false,
            witness: None,
            states_explored: 0,
        };
    }

    match search.dfs(0) {
        Tri::Budget => NonrepReport {
            decided: false,
            answer: false,
            witness: None,
            states_explored: search.meter.states,
        },
        Tri::No => NonrepReport {
            decided: true,
            answer: false,
            witness: None,
            states_explored: search.meter.states,
        },
        Tri::Found => {
            let mut sig = Signature::new();
            for (i, &(u, v)) in edges.iter().enumerate() {
                match search.choice[i] {
                    Choice::Unused => {}
                    Choice::Fwd => sig.add_arc(u, v, 1).expect("no loops"),
                    Choice::Bwd => sig.add_arc(v, u, 1).expect("no loops"),
                }
            }
            let witness = strip_support_cycles(sig);
            debug_assert!(is_orderable(&witness, p).orderable);
            debug_assert!(witness.balance(p, r) >= 1);
            NonrepReport {
                decided: true,
                answer: true,
                witness: Some(witness),
                states_explored: search.meter.states,
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Choice {
    Unused,
    /// Oriented (u, v) as stored in the edge list.
    Fwd,
    /// Oriented (v, u).
    Bwd,
}

enum Tri {
    Found,
    No,
    Budget,
}

struct NonrepSearch<'a> {
    edges: &'a [(usize, usize)],
    dist: &'a [Option<usize>],
    req: Vec<i64>,
    p: &'a [u64],
    in_cnt: Vec<i64>,
    out_cnt: Vec<i64>,
    undecided: Vec<u32>,
    active_at: &'a [Vec<usize>],
    choice: Vec<Choice>,
    failed: HashSet<Vec<u16>>,
    meter: BudgetMeter,
}

const MEMO_CAP: usize = 1 << 22;

impl<'a> NonrepSearch<'a> {
    /// Optimistic balance: even if every undecided incident edge turns
    /// inward, can `v` still meet its requirement?
    fn potential_ok(&self, v: usize) -> bool {
        self.p[v] as i64 + self.in_cnt[v] + self.undecided[v] as i64 - 2 * self.out_cnt[v]
            >= self.req[v]
    }

    fn frontier_key(&self, i: usize) -> Vec<u16> {
        let mut key = Vec::with_capacity(1 + self.active_at[i].len());
        key.push(i as u16);
        for &v in &self.active_at[i] {
            key.push(((self.in_cnt[v] as u16) << 8) | self.out_cnt[v] as u16);
        }
        key
    }

    fn dfs(&mut self, i: usize) -> Tri {
        if i == self.edges.len() {
            return Tri::Found;
        }
        if !self.meter.tick() {
            return Tri::Budget;
        }
        let key = self.frontier_key(i);
        if self.failed.contains(&key) {
            return Tri::No;
        }

        let (u, v) = self.edges[i];
        // Prefer moving toward the target, then leaving the edge unused.
        let toward = if self.dist[v] < self.dist[u] {
            Choice::Fwd
        } else if self.dist[u] < self.dist[v] {
            Choice::Bwd
        } else {
            Choice::Fwd
        };
        let away = match toward {
            Choice::Fwd => Choice::Bwd,
            _ => Choice::Fwd,
        };
        for choice in [toward, Choice::Unused, away] {
            let (src, dst) = match choice {
                Choice::Unused => (usize::MAX, usize::MAX),
                Choice::Fwd => (u, v),
                Choice::Bwd => (v, u),
            };
            self.undecided[u] -= 1;
            self.undecided[v] -= 1;
            if choice != Choice::Unused {
                self.out_cnt[src] += 1;
                self.in_cnt[dst] += 1;
            }
            if self.potential_ok(u) && self.potential_ok(v) {
                self.choice[i] = choice;
                match self.dfs(i + 1) {
                    Tri::Found => return Tri::Found,
                    Tri::Budget => return Tri::Budget,
                    Tri::No => {}
                }
            }
            if choice != Choice::Unused {
                self.out_cnt[src] -= 1;
                self.in_cnt[dst] -= 1;
            }
            self.undecided[u] += 1;
            self.undecided[v] += 1;
        }
        if self.failed.len() < MEMO_CAP {
            self.failed.insert(key);
        }
        Tri::No
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(counts: &[u64]) -> PebbleDistribution {
        PebbleDistribution::new(counts.to_vec())
    }

    #[test]
    fn k2_with_two_pebbles() {
        let g = Graph::complete(2);
        let rep = nonrepetitive_reachable(&g, &dist(&[2, 0]), 1);
        assert!(rep.decided && rep.answer);
    }

    #[test]
    fn path_needing_a_repeated_edge_fails() {
        // Reaching the end of the path needs edge (0,1) twice.
        let g = Graph::path(3);
        let rep = nonrepetitive_reachable(&g, &dist(&[4, 0, 0]), 2);
        assert!(rep.decided && !rep.answer);
        // Plain reachability succeeds, so nonrepetition is the binding
        // constraint here.
        let reach = super::super::reachable(&g, &dist(&[4, 0, 0]), 2, 1, SearchBudget::default());
        assert!(reach.answer);
    }

    #[test]
    fn two_disjoint_suppliers_work() {
        // Star: two leaves with 2 pebbles each can each send one to the
        // hub, and the hub forwards one to the target leaf.
        let g = Graph::star(3);
        let rep = nonrepetitive_reachable(&g, &dist(&[0, 2, 2, 0]), 3);
        assert!(rep.decided && rep.answer);
        let w = rep.witness.unwrap();
        assert!(w.arcs().all(|(_, m)| m == 1));
        assert!(w.balance(&dist(&[0, 2, 2, 0]), 3) >= 1);
    }

    #[test]
    fn pebble_already_on_target() {
        let g = Graph::path(2);
        let rep = nonrepetitive_reachable(&g, &dist(&[0, 1]), 1);
        assert!(rep.decided && rep.answer);
        assert!(rep.witness.unwrap().is_empty());
    }
}
