//! Deciding whether an unordered multiset of pebbling moves admits a valid
//! ordering, plus the signature normalizations the solvers rely on.
//!
//! A signature is orderable under a distribution iff (a) every vertex has
//! non-negative balance and (b) every nontrivial sink component of the
//! component digraph contains a vertex of balance at least one. Runs in time
//! polynomial in vertices + distinct arcs; multiplicities enter only through
//! degree sums.

use crate::distribution::PebbleDistribution;
use crate::error::OrderabilityError;
use crate::moves::MoveSequence;
use crate::signature::Signature;

/// Strongly connected components of a signature's support, contracted to a
/// digraph. A component is trivial iff it is a single vertex with indegree
/// and outdegree zero in the full multigraph.
#[derive(Debug, Clone)]
pub struct ComponentDigraph {
    /// Vertex partition; components are listed in a deterministic order
    /// (sorted by smallest member).
    pub components: Vec<Vec<usize>>,
    /// Which component each vertex belongs to.
    pub component_of: Vec<usize>,
    /// Arcs between distinct components.
    pub component_arcs: Vec<(usize, usize)>,
    /// Trivial flag per component.
    pub trivial: Vec<bool>,
}

impl ComponentDigraph {
    /// Component-level sinks: no outgoing component arcs.
    pub fn sinks(&self) -> Vec<usize> {
        (0..self.components.len())
            .filter(|&c| !self.component_arcs.iter().any(|&(a, _)| a == c))
            .collect()
    }
}

fn vertex_span(d: &Signature, p: &PebbleDistribution) -> usize {
    d.min_vertex_count().max(p.len())
}

/// Contracts each strongly connected component of `d`'s support to a vertex.
pub fn component_digraph(d: &Signature, p: &PebbleDistribution) -> ComponentDigraph {
    let n = vertex_span(d, p);
    let mut adj = vec![Vec::new(); n];
    for ((u, v), _) in d.arcs() {
        adj[u].push(v);
    }

    // Iterative Tarjan.
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0;
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut comp_of = vec![usize::MAX; n];

    for start in 0..n {
        if index[start] != usize::MAX {
            continue;
        }
        // (vertex, next-child position)
        let mut call: Vec<(usize, usize)> = vec![(start, 0)];
        index[start] = next_index;
        low[start] = next_index;
        next_index += 1;
        stack.push(start);
        on_stack[start] = true;
        while let Some(&mut (v, ref mut ci)) = call.last_mut() {
            if *ci < adj[v].len() {
                let w = adj[v][*ci];
                *ci += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }

    comps.sort_by_key(|c| c[0]);
    for (ci, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = ci;
        }
    }

    let mut comp_arcs: Vec<(usize, usize)> = d
        .arcs()
        .map(|((u, v), _)| (comp_of[u], comp_of[v]))
        .filter(|&(a, b)| a != b)
        .collect();
    comp_arcs.sort_unstable();
    comp_arcs.dedup();

    let trivial = comps
        .iter()
        .map(|comp| comp.len() == 1 && d.indegree(comp[0]) == 0 && d.outdegree(comp[0]) == 0)
        .collect();

    ComponentDigraph {
        components: comps,
        component_of: comp_of,
        component_arcs: comp_arcs,
        trivial,
    }
}

/// Why a signature failed (or passed) the orderability test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderabilityDiagnosis {
    Orderable,
    /// Some vertex would end with a negative pebble count.
    NegativeBalance { vertex: usize, balance: i128 },
    /// A nontrivial sink component in which every vertex has balance zero.
    SinkViolation { component: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderabilityReport {
    pub orderable: bool,
    pub diagnosis: OrderabilityDiagnosis,
}

/// Full orderability test: balance condition plus sink condition.
pub fn is_orderable(d: &Signature, p: &PebbleDistribution) -> OrderabilityReport {
    let n = vertex_span(d, p);
    for v in 0..n {
        let b = d.balance(p, v);
        if b < 0 {
            return OrderabilityReport {
                orderable: false,
                diagnosis: OrderabilityDiagnosis::NegativeBalance { vertex: v, balance: b },
            };
        }
    }
    let comp = component_digraph(d, p);
    for c in comp.sinks() {
        if comp.trivial[c] {
            continue;
        }
        if !comp.components[c].iter().any(|&v| d.balance(p, v) >= 1) {
            return OrderabilityReport {
                orderable: false,
                diagnosis: OrderabilityDiagnosis::SinkViolation {
                    component: comp.components[c].clone(),
                },
            };
        }
    }
    OrderabilityReport {
        orderable: true,
        diagnosis: OrderabilityDiagnosis::Orderable,
    }
}

/// True iff the support digraph has no directed cycle.
pub fn is_acyclic(d: &Signature) -> bool {
    let p = PebbleDistribution::zeros(0);
    component_digraph(d, &p)
        .components
        .iter()
        .all(|c| c.len() == 1)
}

/// Orderability for acyclic signatures: the balance condition alone decides.
pub fn is_orderable_acyclic(
    d: &Signature,
    p: &PebbleDistribution,
) -> Result<bool, OrderabilityError> {
    if !is_acyclic(d) {
        return Err(OrderabilityError::NotAcyclic);
    }
    let n = vertex_span(d, p);
    Ok((0..n).all(|v| d.balance(p, v) >= 0))
}

fn padded(p: &PebbleDistribution, n: usize) -> Vec<u64> {
    let mut counts = p.counts().to_vec();
    counts.resize(n.max(counts.len()), 0);
    counts
}

/// Extracts a concrete legal ordering of an orderable signature, following
/// the constructive argument: flush source vertices, recurse into source
/// components, then resolve disjoint strong components one legal move at a
/// time. Ties break by lowest vertex, then lowest arc.
pub fn extract_ordering(
    d: &Signature,
    p: &PebbleDistribution,
) -> Result<MoveSequence, OrderabilityError> {
    if !is_orderable(d, p).orderable {
        return Err(OrderabilityError::NotOrderable);
    }
    let n = vertex_span(d, p);
    let mut cur = d.clone();
    let mut counts = padded(p, n);
    let mut out = Vec::new();
    order_into(&mut cur, &mut counts, &mut out);
    debug_assert!(cur.is_empty());
    Ok(MoveSequence::new(out))
}

fn emit(counts: &mut [u64], out: &mut Vec<(usize, usize)>, u: usize, v: usize) {
    debug_assert!(counts[u] >= 2);
    counts[u] -= 2;
    counts[v] += 1;
    out.push((u, v));
}

fn order_into(d: &mut Signature, counts: &mut [u64], out: &mut Vec<(usize, usize)>) {
    let n = counts.len();
    'outer: loop {
        if d.is_empty() {
            return;
        }
        // Source vertex with moves to make: flush all of them.
        for u in 0..n {
            if d.indegree(u) == 0 && d.outdegree(u) > 0 {
                let bundle: Vec<((usize, usize), u64)> =
                    d.arcs().filter(|&((s, _), _)| s == u).collect();
                for ((s, t), m) in bundle {
                    for _ in 0..m {
                        emit(counts, out, s, t);
                    }
                    d.remove_arc(s, t, m);
                }
                continue 'outer;
            }
        }
        let p_now = PebbleDistribution::new(counts.to_vec());
        let comp = component_digraph(d, &p_now);
        // Source component with an arc leaving it: order its interior first.
        let has_in = |c: usize| comp.component_arcs.iter().any(|&(_, b)| b == c);
        let has_out = |c: usize| comp.component_arcs.iter().any(|&(a, _)| a == c);
        for c in 0..comp.components.len() {
            if !has_in(c) && has_out(c) {
                let inside: Vec<((usize, usize), u64)> = d
                    .arcs()
                    .filter(|&((u, v), _)| {
                        comp.component_of[u] == c && comp.component_of[v] == c
                    })
                    .collect();
                debug_assert!(!inside.is_empty());
                let mut sub = Signature::new();
                for &((u, v), m) in &inside {
                    sub.add_arc(u, v, m).unwrap();
                    d.remove_arc(u, v, m);
                }
                order_into(&mut sub, counts, out);
                continue 'outer;
            }
        }
        // Disjoint strong components: take the lowest legal move whose
        // removal keeps the remainder orderable. The characterization
        // guarantees one exists.
        let arcs: Vec<(usize, usize)> = d.arcs().map(|(a, _)| a).collect();
        for (u, v) in arcs {
            if counts[u] < 2 {
                continue;
            }
            let mut trial = d.clone();
            trial.remove_arc(u, v, 1);
            let mut trial_counts = counts.to_vec();
            trial_counts[u] -= 2;
            trial_counts[v] += 1;
            let trial_p = PebbleDistribution::new(trial_counts);
            if is_orderable(&trial, &trial_p).orderable {
                emit(counts, out, u, v);
                *d = trial;
                continue 'outer;
            }
        }
        unreachable!("an orderable signature always has a feasible first move");
    }
}

/// Removes directed cycles until the support is acyclic. Balances never
/// drop: each removed cycle raises the balance of its vertices by its
/// multiplicity and leaves the rest untouched.
pub fn strip_cycles(
    d: &Signature,
    p: &PebbleDistribution,
) -> Result<Signature, OrderabilityError> {
    if !is_orderable(d, p).orderable {
        return Err(OrderabilityError::NotOrderable);
    }
    let mut cur = d.clone();
    while let Some(cycle) = find_support_cycle(&cur) {
        let m = cycle
            .iter()
            .map(|&(u, v)| cur.multiplicity(u, v))
            .min()
            .expect("cycle is nonempty");
        for (u, v) in cycle {
            cur.remove_arc(u, v, m);
        }
    }
    Ok(cur)
}

/// Finds one directed cycle in the support, as a list of arcs.
fn find_support_cycle(d: &Signature) -> Option<Vec<(usize, usize)>> {
    let n = d.min_vertex_count();
    let mut adj = vec![Vec::new(); n];
    for ((u, v), _) in d.arcs() {
        adj[u].push(v);
    }
    // 0 = white, 1 = on current path, 2 = done
    let mut color = vec![0u8; n];
    let mut parent_arc: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX); n];
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
                    parent_arc[w] = (v, w);
                    call.push((w, 0));
                } else if color[w] == 1 {
                    // Found a cycle w -> ... -> v -> w.
                    let mut cycle = vec![(v, w)];
                    let mut x = v;
                    while x != w {
                        let (pu, pv) = parent_arc[x];
                        cycle.push((pu, pv));
                        x = pu;
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

/// For an acyclic orderable signature, deletes arcs into sinks other than
/// `w` until none remain. The result is orderable, boosts the balance at `w`
/// by at least twice `w`'s former outdegree, and is a proper subgraph
/// whenever `w` had positive outdegree.
pub fn boost_target(
    d: &Signature,
    p: &PebbleDistribution,
    w: usize,
) -> Result<Signature, OrderabilityError> {
    if !is_acyclic(d) {
        return Err(OrderabilityError::NotAcyclic);
    }
    match is_orderable_acyclic(d, p) {
        Ok(true) => {}
        Ok(false) => return Err(OrderabilityError::NotOrderable),
        Err(e) => return Err(e),
    }
    let mut cur = d.clone();
    loop {
        let next = cur
            .arcs()
            .map(|(a, _)| a)
            .find(|&(_, v)| v != w && cur.outdegree(v) == 0);
        match next {
            Some((u, v)) => {
                let m = cur.multiplicity(u, v);
                cur.remove_arc(u, v, m);
            }
            None => return Ok(cur),
        }
    }
}

/// Validation predicate for minimum witnesses that place `k` pebbles on `r`:
/// acyclic, no proper sink other than `r`, `outdegree(r) = 0`, and
/// `indegree(r) = k - p(r)`.
pub fn check_minimum_signature(
    d: &Signature,
    p: &PebbleDistribution,
    r: usize,
    k: u64,
) -> bool {
    let pr = if r < p.len() { p.count(r) } else { 0 };
    if pr > k {
        return false;
    }
    if !is_acyclic(d) {
        return false;
    }
    if d.outdegree(r) != 0 {
        return false;
    }
    if d.indegree(r) != k - pr {
        return false;
    }
    let n = vertex_span(d, p);
    for v in 0..n {
        if v != r && d.outdegree(v) == 0 && d.indegree(v) >= 1 {
            return false;
        }
    }
    true
}

/// True iff every target vertex requests fewer than `k/2` moves out of it.
pub fn check_target_set_outdegrees(d: &Signature, targets: &[usize], k: u64) -> bool {
    targets
        .iter()
        .all(|&v| d.outdegree(v).checked_mul(2).map(|x| x < k).unwrap_or(false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::{apply_sequence, signature_of};
    use crate::graph::Graph;

    fn dist(counts: &[u64]) -> PebbleDistribution {
        PebbleDistribution::new(counts.to_vec())
    }

    fn three_cycle() -> Signature {
        Signature::from_arcs([((0, 1), 1), ((1, 2), 1), ((2, 0), 1)]).unwrap()
    }

    #[test]
    fn directed_cycle_with_unit_pebbles_is_not_orderable() {
        let d = three_cycle();
        let report = is_orderable(&d, &dist(&[1, 1, 1]));
        assert!(!report.orderable);
        assert!(matches!(
            report.diagnosis,
            OrderabilityDiagnosis::SinkViolation { .. }
        ));
    }

    #[test]
    fn single_arc_with_two_pebbles_is_orderable() {
        let d = Signature::from_arcs([((0, 1), 1)]).unwrap();
        assert!(is_orderable(&d, &dist(&[2, 0])).orderable);
    }

    #[test]
    fn cycle_with_one_spare_pebble_is_orderable() {
        let d = three_cycle();
        assert!(is_orderable(&d, &dist(&[2, 1, 1])).orderable);
    }

    #[test]
    fn acyclic_orderability_examples() {
        let d = Signature::from_arcs([((0, 1), 2), ((1, 2), 1)]).unwrap();
        assert_eq!(is_orderable_acyclic(&d, &dist(&[4, 0, 0])), Ok(true));
        assert_eq!(is_orderable_acyclic(&d, &dist(&[3, 0, 0])), Ok(false));
        assert_eq!(
            is_orderable_acyclic(&Signature::new(), &dist(&[0])),
            Ok(true)
        );
        assert_eq!(
            is_orderable_acyclic(&three_cycle(), &dist(&[1, 1, 1])),
            Err(OrderabilityError::NotAcyclic)
        );
    }

    #[test]
    fn extract_ordering_round_trips() {
        let g = Graph::path(3);
        let d = Signature::from_arcs([((0, 1), 2), ((1, 2), 1)]).unwrap();
        let p = dist(&[4, 0, 0]);
        let seq = extract_ordering(&d, &p).unwrap();
        assert_eq!(seq.len(), 3);
        assert_eq!(signature_of(&seq), d);
        let end = apply_sequence(&g, &p, &seq).unwrap();
        assert_eq!(end.counts(), &[0, 0, 1]);
    }

    #[test]
    fn extract_ordering_handles_cycles() {
        let d = three_cycle();
        let p = dist(&[2, 1, 1]);
        let seq = extract_ordering(&d, &p).unwrap();
        assert_eq!(seq.len(), 3);
        assert_eq!(seq.moves()[0].0, 0, "must start at the 2-pebble vertex");
        assert_eq!(signature_of(&seq), d);
        let g = Graph::complete(3);
        assert!(apply_sequence(&g, &p, &seq).is_ok());
    }

    #[test]
    fn extract_ordering_of_empty_signature_is_empty() {
        let seq = extract_ordering(&Signature::new(), &dist(&[1])).unwrap();
        assert!(seq.is_empty());
    }

    #[test]
    fn strip_cycles_examples() {
        let p = dist(&[2, 1, 1]);
        let stripped = strip_cycles(&three_cycle(), &p).unwrap();
        assert!(stripped.is_empty());
        for v in 0..3 {
            assert!(stripped.balance(&p, v) >= three_cycle().balance(&p, v));
        }

        let acyclic = Signature::from_arcs([((0, 1), 2), ((1, 2), 1)]).unwrap();
        assert_eq!(strip_cycles(&acyclic, &dist(&[4, 0, 0])).unwrap(), acyclic);

        let mut with_tail = three_cycle();
        with_tail.add_arc(0, 3, 1).unwrap();
        let p = dist(&[3, 1, 1, 0]);
        let stripped = strip_cycles(&with_tail, &p).unwrap();
        assert_eq!(
            stripped,
            Signature::from_arcs([((0, 3), 1)]).unwrap()
        );
    }

    #[test]
    fn boost_target_examples() {
        // Deleting into-sink arcs all the way back to the target.
        let d = Signature::from_arcs([((0, 1), 2), ((1, 2), 1)]).unwrap();
        let p = dist(&[4, 0, 0]);
        let boosted = boost_target(&d, &p, 0).unwrap();
        assert!(boosted.is_empty());
        assert_eq!(boosted.balance(&p, 0), 4);
        assert!(boosted.balance(&p, 0) >= d.balance(&p, 0) + 2 * d.outdegree(0) as i128);

        // Target already a sink with no other proper sinks: unchanged.
        let d = Signature::from_arcs([((0, 1), 1)]).unwrap();
        assert_eq!(boost_target(&d, &dist(&[2, 0]), 1).unwrap(), d);

        let d = Signature::from_arcs([((0, 1), 2)]).unwrap();
        let p = dist(&[4, 0]);
        let boosted = boost_target(&d, &p, 0).unwrap();
        assert!(boosted.is_empty());
        assert_eq!(boosted.balance(&p, 0), 4);
    }

    #[test]
    fn minimum_signature_examples() {
        let d = Signature::from_arcs([((0, 1), 2), ((1, 2), 1)]).unwrap();
        let p = dist(&[4, 0, 0]);
        assert!(check_minimum_signature(&d, &p, 2, 1));
        assert!(!check_minimum_signature(&d, &p, 2, 2));
        // A proper sink away from the target disqualifies.
        let d = Signature::from_arcs([((0, 1), 2), ((1, 2), 1), ((0, 3), 1)]).unwrap();
        let p = dist(&[6, 0, 0, 0]);
        assert!(!check_minimum_signature(&d, &p, 2, 1));
    }

    #[test]
    fn target_set_outdegree_examples() {
        let d = Signature::from_arcs([((0, 1), 1)]).unwrap();
        assert!(check_target_set_outdegrees(&d, &[1, 2], 2));
        assert!(!check_target_set_outdegrees(&d, &[0], 2));
        assert!(check_target_set_outdegrees(&d, &[0], 4));
    }

    #[test]
    fn trivial_component_uses_multigraph_degrees() {
        // Vertex 2 is a singleton component but receives an arc, so it is a
        // nontrivial sink; with zero pebbles everywhere the balance at 2 is
        // 1 and the sink condition holds.
        let d = Signature::from_arcs([((0, 1), 1), ((1, 2), 1)]).unwrap();
        let comp = component_digraph(&d, &dist(&[4, 0, 0]));
        let c2 = comp.component_of[2];
        assert!(!comp.trivial[c2]);
        assert_eq!(comp.components.len(), 3);
    }
}
