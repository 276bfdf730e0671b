//! The pebbling invariants, computed exactly at desk scale by enumeration
//! over distributions (combinations with repetition) driving the exact
//! solvers.

use crate::distribution::PebbleDistribution;
use crate::error::NumbersError;
use crate::graph::Graph;
use crate::solvers::{reachable, SearchBudget};
use crate::weight::ScaledWeights;

/// Least `k` such that `r` is reachable under every distribution of size
/// `k`. Distributions are enumerated far-from-`r` first, so adversarial
/// counterexamples surface early.
pub fn pi_r(g: &Graph, r: usize, budget: SearchBudget) -> Result<u64, NumbersError> {
    if !g.is_connected() || g.vertex_count() == 0 {
        return Err(NumbersError::Disconnected);
    }
    let n = g.vertex_count();
    let d = g.diameter().expect("connected graph has a diameter") as u32;
    let cutoff = (2u64.pow(d) - 1) * n as u64 + 1;

    // Far-first vertex order: pebbles land on distant vertices first.
    let dist = g.distances_from(r);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(dist[v].unwrap()));

    let mut states = 0u64;
    for k in 1..=cutoff {
        let mut all_good = true;
        let mut iter = Compositions::new(&order, k);
        while let Some(counts) = iter.next() {
            let p = PebbleDistribution::new(counts.to_vec());
            if p.count(r) >= 1 {
                continue;
            }
            let rep = reachable(g, &p, r, 1, budget);
            states += rep.states_explored;
            if !rep.decided {
                return Err(NumbersError::BudgetExceeded {
                    states_explored: states,
                });
            }
            if !rep.answer {
                all_good = false;
                break;
            }
        }
        if all_good {
            return Ok(k);
        }
    }
    unreachable!("pigeonhole: every distribution of the cutoff size reaches r");
}

/// Least `k` such that every vertex is reachable under every size-`k`
/// distribution: the max of the rooted values.
pub fn pi(g: &Graph, budget: SearchBudget) -> Result<u64, NumbersError> {
    if !g.is_connected() || g.vertex_count() == 0 {
        return Err(NumbersError::Disconnected);
    }
    let mut best = 0;
    for r in 0..g.vertex_count() {
        best = best.max(pi_r(g, r, budget)?);
    }
    Ok(best)
}

/// Is there a distribution of size exactly `k` under which every vertex is
/// reachable? Returns one if so. Candidate distributions are pre-filtered
/// by the weight bound toward every vertex before exact checks run.
pub fn pi_hat_le(
    g: &Graph,
    k: u64,
    budget: SearchBudget,
) -> Result<Option<PebbleDistribution>, NumbersError> {
    if !g.is_connected() || g.vertex_count() == 0 {
        return Err(NumbersError::Disconnected);
    }
    let n = g.vertex_count();
    let weights: Vec<ScaledWeights> = (0..n).map(|r| ScaledWeights::toward(g, r)).collect();
    let thresholds: Vec<u128> = weights.iter().map(|w| w.threshold(1)).collect();
    // suffix_max[t][i] = max weight toward t of any vertex with index >= i.
    let suffix_max: Vec<Vec<u128>> = (0..n)
        .map(|t| {
            let mut sm = vec![0u128; n + 1];
            for i in (0..n).rev() {
                sm[i] = sm[i + 1].max(weights[t].per_vertex[i]);
            }
            sm
        })
        .collect();

    let mut counts = vec![0u64; n];
    let mut acc = vec![0u128; n];
    let mut states = 0u64;
    let found = place(
        g,
        k,
        0,
        &mut counts,
        &mut acc,
        &weights,
        &thresholds,
        &suffix_max,
        budget,
        &mut states,
    )?;
    Ok(found)
}

#[allow(clippy::too_many_arguments)]
fn place(
    g: &Graph,
    remaining: u64,
    vi: usize,
    counts: &mut Vec<u64>,
    acc: &mut Vec<u128>,
    weights: &[ScaledWeights],
    thresholds: &[u128],
    suffix_max: &[Vec<u128>],
    budget: SearchBudget,
    states: &mut u64,
) -> Result<Option<PebbleDistribution>, NumbersError> {
    let n = counts.len();
    // Feasibility: every target must still be able to meet its weight bound.
    for t in 0..n {
        if acc[t] + remaining as u128 * suffix_max[t][vi] < thresholds[t] {
            return Ok(None);
        }
    }
    if vi == n {
        debug_assert_eq!(remaining, 0);
        let p = PebbleDistribution::new(counts.clone());
        for r in 0..n {
            if p.count(r) >= 1 {
                continue;
            }
            let rep = reachable(g, &p, r, 1, budget);
            *states += rep.states_explored;
            if !rep.decided {
                return Err(NumbersError::BudgetExceeded {
                    states_explored: *states,
                });
            }
            if !rep.answer {
                return Ok(None);
            }
        }
        return Ok(Some(p));
    }
    let take_all_rest = vi == n - 1;
    let choices: Box<dyn Iterator<Item = u64>> = if take_all_rest {
        Box::new(std::iter::once(remaining))
    } else {
        Box::new((0..=remaining).rev())
    };
    for c in choices {
        counts[vi] = c;
        for t in 0..n {
            acc[t] += c as u128 * weights[t].per_vertex[vi];
        }
        let res = place(
            g,
            remaining - c,
            vi + 1,
            counts,
            acc,
            weights,
            thresholds,
            suffix_max,
            budget,
            states,
        )?;
        for t in 0..n {
            acc[t] -= c as u128 * weights[t].per_vertex[vi];
        }
        counts[vi] = 0;
        if res.is_some() {
            return Ok(res);
        }
    }
    Ok(None)
}

/// Least `k` such that some size-`k` distribution reaches every vertex,
/// with a witness.
pub fn pi_hat(
    g: &Graph,
    budget: SearchBudget,
) -> Result<(u64, PebbleDistribution), NumbersError> {
    if !g.is_connected() || g.vertex_count() == 0 {
        return Err(NumbersError::Disconnected);
    }
    for k in 1.. {
        if let Some(witness) = pi_hat_le(g, k, budget)? {
            return Ok((k, witness));
        }
        assert!(
            k <= g.vertex_count() as u64,
            "the unit distribution reaches every vertex"
        );
    }
    unreachable!()
}

/// The q-cover pebbling number for positive `q`, by the closed form: the
/// worst simple distribution pins the value, so
/// `gamma = 1 + max_v (sum_u q(u) * 2^dist(v,u) - 1)`.
pub fn gamma(g: &Graph, q: &PebbleDistribution) -> Result<u64, NumbersError> {
    if !g.is_connected() || g.vertex_count() == 0 {
        return Err(NumbersError::Disconnected);
    }
    q.validate_for(g).expect("distribution length mismatch");
    if (0..g.vertex_count()).any(|v| q.count(v) == 0) {
        return Err(NumbersError::NotPositive);
    }
    let mut best: u128 = 0;
    for v in 0..g.vertex_count() {
        let dist = g.distances_from(v);
        let mut total: u128 = 0;
        for u in 0..g.vertex_count() {
            let d = dist[u].expect("connected") as u32;
            total += q.count(u) as u128 * (1u128 << d);
        }
        best = best.max(total);
    }
    Ok(u64::try_from(best).expect("cover pebbling number fits in u64"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_of_small_paths() {
        let b = SearchBudget::default();
        assert_eq!(pi(&Graph::complete(2), b).unwrap(), 2);
        assert_eq!(pi(&Graph::path(3), b).unwrap(), 4);
        assert_eq!(pi_r(&Graph::path(3), 2, b).unwrap(), 4);
        assert_eq!(pi_r(&Graph::complete(2), 0, b).unwrap(), 2);
        assert_eq!(pi_r(&Graph::new(1, &[]).unwrap(), 0, b).unwrap(), 1);
    }

    #[test]
    fn pi_hat_of_small_graphs() {
        let b = SearchBudget::default();
        let (k, w) = pi_hat(&Graph::path(3), b).unwrap();
        assert_eq!(k, 2);
        assert_eq!(w.size().unwrap(), 2);
        assert_eq!(pi_hat(&Graph::complete(2), b).unwrap().0, 2);
        assert_eq!(pi_hat(&Graph::new(1, &[]).unwrap(), b).unwrap().0, 1);
    }

    #[test]
    fn gamma_examples() {
        let unit2 = PebbleDistribution::unit(2);
        assert_eq!(gamma(&Graph::complete(2), &unit2).unwrap(), 3);
        let unit3 = PebbleDistribution::unit(3);
        assert_eq!(gamma(&Graph::path(3), &unit3).unwrap(), 7);
        assert_eq!(
            gamma(&Graph::new(1, &[]).unwrap(), &PebbleDistribution::unit(1)).unwrap(),
            1
        );
    }

    #[test]
    fn gamma_rejects_non_positive_targets() {
        let q = PebbleDistribution::new(vec![1, 0]);
        assert_eq!(
            gamma(&Graph::complete(2), &q),
            Err(NumbersError::NotPositive)
        );
    }

    #[test]
    fn disconnected_graphs_are_rejected() {
        let g = Graph::new(2, &[]).unwrap();
        assert_eq!(pi(&g, SearchBudget::default()), Err(NumbersError::Disconnected));
        assert_eq!(
            gamma(&g, &PebbleDistribution::unit(2)),
            Err(NumbersError::Disconnected)
        );
    }
}

/// Iterator over the compositions of `total` into one count per vertex of
/// `order`. The first composition puts everything on `order[0]`; successors
/// shift pebbles rightward, so earlier (e.g. adversarially farther) vertices
/// stay heavy for as long as possible.
pub struct Compositions<'a> {
    order: &'a [usize],
    chosen: Vec<u64>,
    counts: Vec<u64>,
    total: u64,
    started: bool,
    done: bool,
}

impl<'a> Compositions<'a> {
    pub fn new(order: &'a [usize], total: u64) -> Compositions<'a> {
        let max_vertex = order.iter().copied().max().map_or(0, |m| m + 1);
        Compositions {
            order,
            chosen: vec![0; order.len()],
            counts: vec![0; max_vertex],
            total,
            started: false,
            done: order.is_empty() && total > 0,
        }
    }

    /// Advances to the next composition; yields counts indexed by vertex.
    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Option<&[u64]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if let Some(first) = self.chosen.first_mut() {
                *first = self.total;
                self.counts[self.order[0]] = self.total;
            }
            return Some(&self.counts);
        }
        let len = self.order.len();
        // Rightmost non-final position still holding pebbles.
        let pivot = (0..len.saturating_sub(1)).rev().find(|&i| self.chosen[i] > 0);
        let Some(i) = pivot else {
            self.done = true;
            return None;
        };
        let tail: u64 = self.chosen[i + 1..].iter().sum();
        self.chosen[i] -= 1;
        self.counts[self.order[i]] = self.chosen[i];
        for j in (i + 1)..len {
            self.chosen[j] = 0;
            self.counts[self.order[j]] = 0;
        }
        self.chosen[i + 1] = tail + 1;
        self.counts[self.order[i + 1]] = tail + 1;
        Some(&self.counts)
    }
}

#[cfg(test)]
mod composition_tests {
    use super::*;

    #[test]
    fn enumerates_all_compositions_once() {
        let order = [2, 0, 1];
        let mut it = Compositions::new(&order, 3);
        let mut seen = Vec::new();
        while let Some(c) = it.next() {
            seen.push(c.to_vec());
        }
        // C(3 + 2, 2) = 10 compositions of 3 into 3 parts.
        assert_eq!(seen.len(), 10);
        assert_eq!(seen[0], vec![0, 0, 3], "far-first: everything on order[0]");
        let mut dedup = seen.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 10);
        assert!(seen.iter().all(|c| c.iter().sum::<u64>() == 3));
    }

    #[test]
    fn degenerate_shapes() {
        let mut it = Compositions::new(&[], 0);
        assert_eq!(it.next(), Some(&[][..]));
        assert_eq!(it.next(), None);

        let mut it = Compositions::new(&[], 1);
        assert_eq!(it.next(), None);

        let order = [0];
        let mut it = Compositions::new(&order, 5);
        assert_eq!(it.next(), Some(&[5][..]));
        assert_eq!(it.next(), None);
    }
}
