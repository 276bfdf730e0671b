//! Brute-force oracles, deliberately independent of the production solver
//! paths: permutation search for orderability, unpruned state enumeration
//! for reachability questions, and plain backtracking for Hamiltonian
//! paths. Desk scale only.

use std::collections::HashSet;

use rand::Rng;

use crate::distribution::PebbleDistribution;
use crate::graph::Graph;
use crate::signature::Signature;

/// Is some ordering of the arc multiset a legal move sequence? Exhaustive
/// backtracking over distinct next arcs.
pub fn orderable_by_permutation(d: &Signature, p: &PebbleDistribution) -> bool {
    let n = d.min_vertex_count().max(p.len());
    let mut counts: Vec<i64> = (0..n)
        .map(|v| if v < p.len() { p.count(v) as i64 } else { 0 })
        .collect();
    let mut arcs: Vec<(usize, usize, u64)> = d.arcs().map(|((u, v), m)| (u, v, m)).collect();
    fn go(counts: &mut [i64], arcs: &mut [(usize, usize, u64)]) -> bool {
        if arcs.iter().all(|&(_, _, m)| m == 0) {
            return true;
        }
        for i in 0..arcs.len() {
            let (u, v, m) = arcs[i];
            if m == 0 || counts[u] < 2 {
                continue;
            }
            arcs[i].2 -= 1;
            counts[u] -= 2;
            counts[v] += 1;
            if go(counts, arcs) {
                return true;
            }
            counts[v] -= 1;
            counts[u] += 2;
            arcs[i].2 += 1;
        }
        false
    }
    go(&mut counts, &mut arcs)
}

/// Reachability by full enumeration of the distribution space: no pruning,
/// no preprocessing.
pub fn reachable_by_enumeration(g: &Graph, p: &PebbleDistribution, r: usize, k: u64) -> bool {
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut stack = vec![p.counts().to_vec()];
    while let Some(counts) = stack.pop() {
        if counts[r] >= k {
            return true;
        }
        if !seen.insert(counts.clone()) {
            continue;
        }
        for u in 0..counts.len() {
            if counts[u] < 2 {
                continue;
            }
            for &v in g.neighbors(u) {
                let mut next = counts.clone();
                next[u] -= 2;
                next[v] += 1;
                stack.push(next);
            }
        }
    }
    false
}

/// Exact maximum pebbles placeable on `r`, by full enumeration.
pub fn max_pebbles_by_enumeration(g: &Graph, p: &PebbleDistribution, r: usize) -> u64 {
    let mut best = 0;
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut stack = vec![p.counts().to_vec()];
    while let Some(counts) = stack.pop() {
        if !seen.insert(counts.clone()) {
            continue;
        }
        best = best.max(counts[r]);
        for u in 0..counts.len() {
            if counts[u] < 2 {
                continue;
            }
            for &v in g.neighbors(u) {
                let mut next = counts.clone();
                next[u] -= 2;
                next[v] += 1;
                stack.push(next);
            }
        }
    }
    best
}

/// Coverability by full enumeration.
pub fn coverable_by_enumeration(g: &Graph, p: &PebbleDistribution, q: &PebbleDistribution) -> bool {
    let want = q.counts();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut stack = vec![p.counts().to_vec()];
    while let Some(counts) = stack.pop() {
        if counts.iter().zip(want).all(|(&a, &b)| a >= b) {
            return true;
        }
        if !seen.insert(counts.clone()) {
            continue;
        }
        for u in 0..counts.len() {
            if counts[u] < 2 {
                continue;
            }
            for &v in g.neighbors(u) {
                let mut next = counts.clone();
                next[u] -= 2;
                next[v] += 1;
                stack.push(next);
            }
        }
    }
    false
}

/// Annihilation by full enumeration.
pub fn annihilation_by_enumeration(g: &Graph, p: &PebbleDistribution) -> bool {
    let total = p.size().expect("size");
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut stack = vec![(p.counts().to_vec(), total)];
    while let Some((counts, left)) = stack.pop() {
        if left == 1 {
            return true;
        }
        if !seen.insert(counts.clone()) {
            continue;
        }
        for u in 0..counts.len() {
            if counts[u] < 2 {
                continue;
            }
            for &v in g.neighbors(u) {
                let mut next = counts.clone();
                next[u] -= 2;
                next[v] += 1;
                stack.push((next, left - 1));
            }
        }
    }
    false
}

/// Hamiltonian path existence by backtracking over start vertices.
pub fn hamiltonian_path_exists(g: &Graph) -> bool {
    let n = g.vertex_count();
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    fn extend(g: &Graph, visited: &mut Vec<bool>, last: usize, placed: usize) -> bool {
        if placed == g.vertex_count() {
            return true;
        }
        for &w in g.neighbors(last) {
            if !visited[w] {
                visited[w] = true;
                if extend(g, visited, w, placed + 1) {
                    return true;
                }
                visited[w] = false;
            }
        }
        false
    }
    for start in 0..n {
        let mut visited = vec![false; n];
        visited[start] = true;
        if extend(g, &mut visited, start, 1) {
            return true;
        }
    }
    false
}

/// All labeled graphs on `n` vertices, via edge bitmasks.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| (mask >> i) & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        out.push(Graph::new(n, &edges).expect("mask edges valid"));
    }
    out
}

pub fn connected_graphs(n: usize) -> Vec<Graph> {
    all_graphs(n).into_iter().filter(|g| g.is_connected()).collect()
}

/// Random labeled tree on `n` vertices: each vertex joins a random earlier
/// one (connected and acyclic by construction).
pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> Graph {
    assert!(n >= 1);
    let mut edges = Vec::new();
    for v in 1..n {
        let parent = rng.gen_range(0..v);
        edges.push((parent, v));
    }
    Graph::new(n, &edges).expect("tree edges valid")
}

/// Random distribution of `total` pebbles on `n` vertices.
pub fn random_distribution<R: Rng>(rng: &mut R, n: usize, total: u64) -> PebbleDistribution {
    let mut counts = vec![0u64; n];
    for _ in 0..total {
        counts[rng.gen_range(0..n)] += 1;
    }
    PebbleDistribution::new(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_oracle_matches_known_cases() {
        let cycle = Signature::from_arcs([((0, 1), 1), ((1, 2), 1), ((2, 0), 1)]).unwrap();
        assert!(!orderable_by_permutation(
            &cycle,
            &PebbleDistribution::new(vec![1, 1, 1])
        ));
        assert!(orderable_by_permutation(
            &cycle,
            &PebbleDistribution::new(vec![2, 1, 1])
        ));
    }

    #[test]
    fn enumeration_oracles_on_paths() {
        let g = Graph::path(3);
        assert!(reachable_by_enumeration(
            &g,
            &PebbleDistribution::new(vec![4, 0, 0]),
            2,
            1
        ));
        assert!(!reachable_by_enumeration(
            &g,
            &PebbleDistribution::new(vec![3, 0, 0]),
            2,
            1
        ));
        assert_eq!(
            max_pebbles_by_enumeration(&g, &PebbleDistribution::new(vec![9, 1, 0]), 2),
            2
        );
    }

    #[test]
    fn hamiltonian_paths() {
        assert!(hamiltonian_path_exists(&Graph::path(4)));
        assert!(hamiltonian_path_exists(&Graph::complete(3)));
        // Star with three leaves has none.
        assert!(!hamiltonian_path_exists(&Graph::star(3)));
        // Disconnected graphs have none.
        assert!(!hamiltonian_path_exists(&Graph::new(3, &[(0, 1)]).unwrap()));
    }

    #[test]
    fn graph_enumeration_counts() {
        assert_eq!(all_graphs(3).len(), 8);
        assert_eq!(connected_graphs(3).len(), 4);
        assert_eq!(connected_graphs(4).len(), 38);
    }
}
