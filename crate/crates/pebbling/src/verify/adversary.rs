//! Exact adversarial maximization for gadget thresholds: find the largest
//! distribution on a gadget under which the configured solver goal (reach
//! the joined target, or become potent) still fails. Thresholds are one
//! more than this maximum.
//!
//! Enumerating raw distributions is hopeless at the relevant sizes, so the
//! search runs over a reduced space:
//! - pendant paths are folded to a delivery amount `d` into their hub,
//!   carrying the maximum pebble mass a path can hold while delivering at
//!   most `d` (exact: a candidate's feasibility depends on a pendant path
//!   only through its delivery, and mass-maximal fillings realize every
//!   delivery);
//! - remaining core vertices are raw count variables.
//!
//! Soundness of the pruning:
//! - value caps come from solver probes (a singleton load above the cap
//!   provably succeeds, so no feasible candidate exceeds it; larger
//!   prefixes only help the solver);
//! - pairwise hub-total constraints are probed the same way;
//! - the optimistic completion bound combines per-family knapsack tables
//!   with the probed pairwise constraints;
//! - branches are cut early by a cheap *attainable* strategy check, and
//!   every surviving leaf is settled by the exact solver.

use std::collections::HashMap;

use crate::distribution::PebbleDistribution;
use crate::graph::Graph;
use crate::solvers::{coverable, reachable, SearchBudget};

/// How a variable's value turns into pebble mass.
#[derive(Debug, Clone)]
pub enum Mass {
    /// Raw vertex count: mass equals the value.
    Identity,
    /// Folded pendant path: `table[d]` is the maximum path mass with
    /// delivery at most `d`.
    Table(Vec<u64>),
}

impl Mass {
    fn at(&self, v: u64) -> u64 {
        match self {
            Mass::Identity => v,
            Mass::Table(t) => t[v as usize],
        }
    }

    fn cap(&self) -> u64 {
        match self {
            Mass::Identity => u64::MAX,
            Mass::Table(t) => (t.len() - 1) as u64,
        }
    }
}

/// Dynamic cap refinements, evaluated against the current hub totals.
#[derive(Debug, Clone)]
pub enum DynCap {
    None,
    /// Member of hub family `hub`: capped by the family's remaining slack.
    HubSlack { hub: usize },
    /// A vertex at `depth` edges from `hub` along a path: it cannot hold
    /// more than `2^depth * slack + 2^depth - 1` pebbles (more would let
    /// the solver push the hub past its cap).
    PathFromHub { hub: usize, depth: u32 },
    /// On a path joining two hubs: the lower of the two path caps.
    PathBetweenHubs {
        hub_a: usize,
        depth_a: u32,
        hub_b: usize,
        depth_b: u32,
    },
    /// Internal vertex of an overflow path: `depth_from_hub` edges past the
    /// hub, `depth_to_w` edges short of a target-adjacent vertex of cap 1.
    /// It holds at most `2^(depth_to_w + 1) - 1` minus the hub's inflow.
    OverflowInternal {
        hub: usize,
        depth_from_hub: u32,
        depth_to_w: u32,
    },
    /// A target-adjacent vertex (cap 1) fed by hubs at path distance
    /// `2^shift`: forced to 0 once a hub alone can push a pebble onto it.
    OverflowVertex {
        hubs: Vec<usize>,
        shift: u32,
    },
}

#[derive(Debug, Clone)]
pub struct Variable {
    pub label: String,
    /// Where the value lands in the core counts (delivery variables load
    /// their hub's core vertex).
    pub core_vertex: usize,
    /// Hub family for the joint-slack constraint, if any.
    pub hub: Option<usize>,
    pub mass: Mass,
    pub static_cap: u64,
    pub dyn_cap: DynCap,
}

pub struct Problem {
    pub core: Graph,
    /// Hub core vertices, in variable order.
    pub hubs: Vec<usize>,
    /// Per-hub joint cap on the total load (probed).
    pub hub_caps: Vec<u64>,
    /// `pair_limits[i][j][a][b]` = false when hub totals `a` at `i` and `b`
    /// at `j` are jointly infeasible (probed).
    pub pair_allowed: Vec<Vec<Option<Vec<Vec<bool>>>>>,
    pub vars: Vec<Variable>,
    /// Joint bounds over consecutive variable ranges `[first, last]`:
    /// when no member is assigned yet, the closure (of the hub totals)
    /// bounds the whole group's mass more tightly than per-variable caps.
    pub groups: Vec<(usize, usize, Box<dyn Fn(&[u64]) -> u64>)>,
    /// Cheap, attainable success check (prunes definite failures).
    pub quick_bad: Box<dyn Fn(&[u64]) -> bool>,
    /// Exact feasibility: `Some(true)` means the candidate defeats the
    /// solver (adversary-feasible); `None` means undecided in budget.
    pub exact_ok: Box<dyn Fn(&[u64], SearchBudget) -> Option<bool>>,
    pub leaf_budget: SearchBudget,
    pub node_limit: u64,
    /// Print progress to stderr every ~33M nodes.
    pub verbose: bool,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub max_size: u64,
    pub witness_values: Vec<u64>,
    pub witness_core: Vec<u64>,
    pub nodes: u64,
    pub leaf_tests: u64,
    pub exhausted: bool,
}

struct Search<'a> {
    p: &'a Problem,
    /// Per-hub: list of (var index) members, for family tables.
    family_bound: Vec<Vec<u64>>,
    /// family_bound_from[h][k][s]: best mass of members k.. of hub h's
    /// family with joint slack s.
    family_bound_from: HashMap<(usize, usize), Vec<u64>>,
    family_members: Vec<Vec<usize>>,
    hub_totals: Vec<u64>,
    values: Vec<u64>,
    core_counts: Vec<u64>,
    best: u64,
    best_values: Vec<u64>,
    best_core: Vec<u64>,
    nodes: u64,
    leaf_tests: u64,
    exhausted: bool,
    pattern_cache: HashMap<u64, u64>,
    bound_cache: HashMap<u64, u64>,
}

pub fn maximize(problem: &Problem) -> Outcome {
    let nhubs = problem.hubs.len();
    let mut family_members = vec![Vec::new(); nhubs];
    for (i, v) in problem.vars.iter().enumerate() {
        if let Some(h) = v.hub {
            family_members[h].push(i);
        }
    }
    // Knapsack tables per hub family: best mass for a given joint budget.
    let mut family_bound = Vec::new();
    let mut family_bound_from = HashMap::new();
    for h in 0..nhubs {
        let cap = problem.hub_caps[h] as usize;
        let members = &family_members[h];
        // suffix tables: from member k onward.
        let mut suffix: Vec<u64> = vec![0; cap + 1];
        for (k, &vi) in members.iter().enumerate().rev() {
            let var = &problem.vars[vi];
            let mut next: Vec<u64> = vec![0; cap + 1];
            for s in 0..=cap {
                let mut best = 0;
                let vmax = (s as u64).min(var.static_cap).min(var.mass.cap());
                for val in 0..=vmax {
                    let m = var.mass.at(val) + suffix[s - val as usize];
                    best = best.max(m);
                }
                next[s] = best;
            }
            family_bound_from.insert((h, k), next.clone());
            suffix = next;
        }
        family_bound.push(suffix);
    }

    let mut search = Search {
        p: problem,
        family_bound,
        family_bound_from,
        family_members,
        hub_totals: vec![0; nhubs],
        values: vec![0; problem.vars.len()],
        core_counts: vec![0; problem.core.vertex_count()],
        best: 0,
        best_values: vec![0; problem.vars.len()],
        best_core: vec![0; problem.core.vertex_count()],
        nodes: 0,
        leaf_tests: 0,
        exhausted: false,
        pattern_cache: HashMap::new(),
        bound_cache: HashMap::new(),
    };
    search.dfs(0, 0);
    Outcome {
        max_size: search.best,
        witness_values: search.best_values,
        witness_core: search.best_core,
        nodes: search.nodes,
        leaf_tests: search.leaf_tests,
        exhausted: search.exhausted,
    }
}

impl<'a> Search<'a> {
    fn dyn_cap(&self, vi: usize) -> u64 {
        let var = &self.p.vars[vi];
        let slack = |h: usize| self.p.hub_caps[h].saturating_sub(self.hub_totals[h]);
        let path_cap = |h: usize, depth: u32| {
            let s = slack(h);
            (1u64 << depth) * s + (1u64 << depth) - 1
        };
        let refined = match var.dyn_cap {
            DynCap::None => u64::MAX,
            DynCap::HubSlack { hub } => slack(hub),
            DynCap::PathFromHub { hub, depth } => path_cap(hub, depth),
            DynCap::PathBetweenHubs {
                hub_a,
                depth_a,
                hub_b,
                depth_b,
            } => path_cap(hub_a, depth_a).min(path_cap(hub_b, depth_b)),
            DynCap::OverflowInternal {
                hub,
                depth_from_hub,
                depth_to_w,
            } => {
                let room = (1u64 << (depth_to_w + 1)) - 1;
                room.saturating_sub(self.hub_totals[hub] >> depth_from_hub)
            }
            DynCap::OverflowVertex { ref hubs, shift } => {
                let arrivals: u64 = hubs.iter().map(|&h| self.hub_totals[h] >> shift).sum();
                if arrivals >= 1 {
                    0
                } else {
                    1
                }
            }
        };
        var.static_cap.min(var.mass.cap()).min(refined)
    }

    /// Best possible mass of the remaining hub families, enumerating their
    /// totals under the probed pairwise constraints.
    fn pattern_bound(&mut self, level: usize) -> u64 {
        let remaining: Vec<usize> = (0..self.p.hubs.len())
            .filter(|&h| {
                self.family_members[h]
                    .iter()
                    .any(|&vi| vi >= level)
            })
            .collect();
        if remaining.is_empty() {
            return 0;
        }
        let mut key = level as u64;
        for &t in &self.hub_totals {
            key = key * 64 + t;
        }
        if let Some(&cached) = self.pattern_cache.get(&key) {
            return cached;
        }
        // For a partially assigned family, members below `level` already
        // contributed their mass; bound the rest with the suffix table.
        let mut best_total = 0u64;
        let mut totals: Vec<u64> = remaining.iter().map(|&h| self.hub_totals[h]).collect();
        self.enumerate_patterns(&remaining, 0, &mut totals, 0, &mut best_total, level);
        self.pattern_cache.insert(key, best_total);
        best_total
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate_patterns(
        &self,
        remaining: &[usize],
        idx: usize,
        totals: &mut Vec<u64>,
        acc: u64,
        best: &mut u64,
        level: usize,
    ) {
        if idx == remaining.len() {
            *best = (*best).max(acc);
            return;
        }
        let h = remaining[idx];
        let assigned = self.hub_totals[h];
        // First family member not yet assigned.
        let k = self.family_members[h]
            .iter()
            .position(|&vi| vi >= level)
            .unwrap_or(self.family_members[h].len());
        let table: &Vec<u64> = if k == 0 {
            &self.family_bound[h]
        } else {
            &self.family_bound_from[&(h, k)]
        };
        for t in assigned..=self.p.hub_caps[h] {
            // Pairwise feasibility against fixed hubs and earlier choices.
            let mut ok = true;
            for other in 0..self.p.hubs.len() {
                if other == h {
                    continue;
                }
                let other_total = match remaining.iter().position(|&x| x == other) {
                    Some(j) if j < idx => totals[j],
                    Some(_) => continue, // decided later in this enumeration
                    None => self.hub_totals[other],
                };
                if let Some(tbl) = &self.p.pair_allowed[h][other] {
                    if !tbl[t as usize][other_total as usize] {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            totals[idx] = t;
            let gain = table[(t - assigned) as usize];
            self.enumerate_patterns(remaining, idx + 1, totals, acc + gain, best, level);
        }
    }

    /// Optimistic completion mass from `level` on. Depends only on the
    /// level and the hub totals, so it caches on that pair.
    fn upper_bound(&mut self, level: usize, mass: u64) -> u64 {
        let mut key = level as u64;
        for &t in &self.hub_totals {
            key = key * 64 + t;
        }
        if let Some(&cached) = self.bound_cache.get(&key) {
            return mass.saturating_add(cached);
        }
        let mut rest = self.pattern_bound(level);
        let mut vi = level;
        while vi < self.p.vars.len() {
            if self.p.vars[vi].hub.is_some() {
                vi += 1;
                continue; // covered by the pattern bound
            }
            // A joint group bound applies when the whole group lies ahead.
            if let Some((_, last, bound_fn)) = self
                .p
                .groups
                .iter()
                .find(|(first, _, _)| *first == vi && level <= *first)
            {
                rest = rest.saturating_add(bound_fn(&self.hub_totals));
                vi = *last + 1;
                continue;
            }
            let cap = self.dyn_cap(vi);
            rest = rest.saturating_add(self.p.vars[vi].mass.at(cap));
            vi += 1;
        }
        self.bound_cache.insert(key, rest);
        mass.saturating_add(rest)
    }

    fn dfs(&mut self, level: usize, mass: u64) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.p.node_limit {
            self.exhausted = true;
            return;
        }
        if self.p.verbose && self.nodes % (1 << 25) == 0 {
            eprintln!(
                "  adversary: nodes={} best={} leaves={} level={}",
                self.nodes, self.best, self.leaf_tests, level
            );
        }
        if level == self.p.vars.len() {
            // Only candidates that would improve the incumbent are worth an
            // exact solver call.
            if mass <= self.best {
                return;
            }
            self.leaf_tests += 1;
            match (self.p.exact_ok)(&self.core_counts, self.p.leaf_budget) {
                Some(true) => {
                    self.best = mass;
                    self.best_values = self.values.clone();
                    self.best_core = self.core_counts.clone();
                }
                Some(false) => {}
                None => self.exhausted = true,
            }
            return;
        }
        if self.upper_bound(level, mass) <= self.best {
            return;
        }
        let var = &self.p.vars[level];
        let cap = self.dyn_cap(level);
        let core_vertex = var.core_vertex;
        let hub = var.hub;
        for val in (0..=cap).rev() {
            // Probed pairwise hub constraints prune directly.
            if let Some(h) = hub {
                let t = self.hub_totals[h] + val;
                let blocked = (0..self.p.hubs.len()).any(|other| {
                    other != h
                        && self.p.pair_allowed[h][other]
                            .as_ref()
                            .is_some_and(|tbl| {
                                !tbl[t as usize][self.hub_totals[other] as usize]
                            })
                });
                if blocked {
                    continue;
                }
            }
            self.values[level] = val;
            self.core_counts[core_vertex] += val;
            if let Some(h) = hub {
                self.hub_totals[h] += val;
            }
            let pruned = val > 0 && (self.p.quick_bad)(&self.core_counts);
            if !pruned {
                self.dfs(level + 1, mass + self.p.vars[level].mass.at(val));
            }
            if let Some(h) = hub {
                self.hub_totals[h] -= val;
            }
            self.core_counts[core_vertex] -= val;
            self.values[level] = 0;
            if self.exhausted {
                return;
            }
        }
    }
}

/// Maximum pebble mass a pendant path can hold while delivering at most
/// `d` pebbles to its attachment, for `d = 0..=max_delivery`. Index `j`
/// counts edges from the attachment; the path has `len` vertices beyond it.
pub fn pendant_path_mass_table(len: u32, max_delivery: u64) -> Vec<u64> {
    // m[j](budget) = max mass on vertices j.. with at most `budget`
    // deliverable sitting at vertex j, computed from the far end inward.
    // Moving from vertex j+1 to j halves, so a budget b at j allows
    // 2b + 1 at j + 1.
    fn m(len: u32, j: u32, budget: u64) -> u64 {
        if j == len {
            return 0;
        }
        let mut best = 0;
        for own in 0..=budget {
            let downstream = m(len, j + 1, 2 * (budget - own) + 1);
            best = best.max(own + downstream);
        }
        best
    }
    (0..=max_delivery)
        .map(|d| m(len, 0, 2 * d + 1))
        .collect()
}

/// Probes the largest singleton load at `vertex` that keeps the candidate
/// adversary-feasible.
pub fn probe_cap(
    exact_ok: &dyn Fn(&[u64], SearchBudget) -> Option<bool>,
    n: usize,
    vertex: usize,
    limit: u64,
    budget: SearchBudget,
) -> Option<u64> {
    let mut cap = 0;
    for v in 1..=limit {
        let mut counts = vec![0u64; n];
        counts[vertex] = v;
        match exact_ok(&counts, budget) {
            Some(true) => cap = v,
            Some(false) => break,
            None => return None,
        }
    }
    Some(cap)
}

/// Standard exact feasibility adapters.
pub fn not_reachable_test<'a>(
    g: &'a Graph,
    r: usize,
) -> impl Fn(&[u64], SearchBudget) -> Option<bool> + 'a {
    move |counts, budget| {
        let p = PebbleDistribution::new(counts.to_vec());
        let rep = reachable(g, &p, r, 1, budget);
        if rep.decided {
            Some(!rep.answer)
        } else {
            None
        }
    }
}

/// Adversary-ok iff the target is unreachable AND no quota is coverable.
pub fn not_potent_test<'a>(
    g: &'a Graph,
    r: usize,
    quotas: &'a [PebbleDistribution],
) -> impl Fn(&[u64], SearchBudget) -> Option<bool> + 'a {
    move |counts, budget| {
        let p = PebbleDistribution::new(counts.to_vec());
        let rep = reachable(g, &p, r, 1, budget);
        if !rep.decided {
            return None;
        }
        if rep.answer {
            return Some(false);
        }
        for q in quotas {
            let rep = coverable(g, &p, q, budget);
            if !rep.decided {
                return None;
            }
            if rep.answer {
                return Some(false);
            }
        }
        Some(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_mass_tables() {
        // Two-vertex pendant path: delivering at most d allows 4d + 3.
        assert_eq!(pendant_path_mass_table(2, 7), vec![
            3, 7, 11, 15, 19, 23, 27, 31
        ]);
        // One-vertex pendant path: 2d + 1.
        assert_eq!(pendant_path_mass_table(1, 3), vec![1, 3, 5, 7]);
    }
}
