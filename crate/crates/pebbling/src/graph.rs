//! Simple undirected graphs on dense 0-based vertex indices.

use std::collections::BTreeSet;
use std::collections::VecDeque;

use crate::error::CoreError;

/// A simple undirected graph. No loops, no multi-edges; every endpoint lies
/// in `[0, vertex_count)`. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list, normalizing each pair to `(min, max)`.
    pub fn new(vertex_count: usize, edge_list: &[(usize, usize)]) -> Result<Graph, CoreError> {
        let mut edges = BTreeSet::new();
        let mut adj = vec![Vec::new(); vertex_count];
        for &(u, v) in edge_list {
            if u >= vertex_count || v >= vertex_count {
                return Err(CoreError::VertexOutOfRange {
                    vertex: u.max(v),
                    vertex_count,
                });
            }
            if u == v {
                return Err(CoreError::LoopEdge { vertex: u });
            }
            let e = (u.min(v), u.max(v));
            if !edges.insert(e) {
                return Err(CoreError::DuplicateEdge { u: e.0, v: e.1 });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        Ok(Graph {
            n: vertex_count,
            edges,
            adj,
        })
    }

    /// Path with `n` vertices (0-1-2-...-n-1).
    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::new(n, &edges).expect("path edges are valid")
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                edges.push((u, v));
            }
        }
        Graph::new(n, &edges).expect("complete-graph edges are valid")
    }

    /// Star `K_{1,k}` with the hub at vertex 0.
    pub fn star(k: usize) -> Graph {
        let edges: Vec<_> = (1..=k).map(|i| (0, i)).collect();
        Graph::new(k + 1, &edges).expect("star edges are valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as normalized `(min, max)` pairs in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// BFS distances from `root`; `None` for unreachable vertices.
    pub fn distances_from(&self, root: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[root] = Some(0);
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        self.distances_from(0).iter().all(|d| d.is_some())
    }

    /// Diameter of a connected graph; `None` if disconnected or empty.
    pub fn diameter(&self) -> Option<usize> {
        if self.n == 0 {
            return None;
        }
        let mut best = 0;
        for v in 0..self.n {
            for d in self.distances_from(v) {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    pub fn is_tree(&self) -> bool {
        self.n > 0 && self.edges.len() == self.n - 1 && self.is_connected()
    }

    /// Two-coloring if the graph is bipartite.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut color = vec![None; self.n];
        for start in 0..self.n {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for &w in &self.adj[u] {
                    match color[w] {
                        None => {
                            color[w] = Some(!cu);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.unwrap()).collect())
    }

    /// Cut vertices (articulation points).
    pub fn cut_vertices(&self) -> Vec<usize> {
        // Small graphs only: test each removal by connectivity of the rest.
        let mut cuts = Vec::new();
        if self.n < 3 {
            return cuts;
        }
        for v in 0..self.n {
            let keep: Vec<usize> = (0..self.n).filter(|&u| u != v).collect();
            if !self.is_connected_on(&keep) {
                cuts.push(v);
            }
        }
        cuts
    }

    /// Connectivity of the induced subgraph on `keep` (used for cut-vertex tests).
    fn is_connected_on(&self, keep: &[usize]) -> bool {
        if keep.is_empty() {
            return true;
        }
        let in_keep: BTreeSet<usize> = keep.iter().copied().collect();
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([keep[0]]);
        seen.insert(keep[0]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if in_keep.contains(&w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == keep.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_duplicates() {
        assert!(matches!(
            Graph::new(2, &[(0, 0)]),
            Err(CoreError::LoopEdge { vertex: 0 })
        ));
        assert!(matches!(
            Graph::new(2, &[(0, 1), (1, 0)]),
            Err(CoreError::DuplicateEdge { u: 0, v: 1 })
        ));
        assert!(matches!(
            Graph::new(2, &[(0, 2)]),
            Err(CoreError::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn path_distances() {
        let g = Graph::path(4);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.distances_from(0), vec![Some(0), Some(1), Some(2), Some(3)]);
        assert_eq!(g.diameter(), Some(3));
        assert!(g.is_tree());
    }

    #[test]
    fn cut_vertices_of_path() {
        let g = Graph::path(3);
        assert_eq!(g.cut_vertices(), vec![1]);
        assert!(Graph::complete(4).cut_vertices().is_empty());
    }

    #[test]
    fn bipartition_detects_odd_cycle() {
        let c3 = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(c3.bipartition().is_none());
        assert!(Graph::path(5).bipartition().is_some());
    }
}
