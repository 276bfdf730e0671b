//! Pendant-tree folding: an exact preprocessing step for target-directed
//! searches.
//!
//! A pendant subtree hanging off the rest of the graph can interact with a
//! target outside it only by delivering pebbles through its attachment
//! vertex, and the greedy amount is the most it can deliver. Peeling leaves
//! and folding `floor(count/2)` into the neighbor therefore preserves
//! reachability answers exactly while shrinking the state space.

use crate::distribution::PebbleDistribution;
use crate::graph::Graph;
use crate::signature::Signature;

/// A reachability-equivalent reduced instance, with enough bookkeeping to
/// lift witnesses back to the original graph.
#[derive(Debug, Clone)]
pub struct FoldedInstance {
    pub graph: Graph,
    pub counts: Vec<u64>,
    /// Core index for each surviving original vertex.
    pub core_of: Vec<Option<usize>>,
    /// Original index of each core vertex.
    pub original_of: Vec<usize>,
    /// Greedy delivery arcs `(u, v, multiplicity)` in original indices, in a
    /// replayable (leaf-first) order.
    pub delivery_arcs: Vec<(usize, usize, u64)>,
}

impl FoldedInstance {
    /// Folds every pendant tree not containing a vertex from `keep`.
    pub fn fold(g: &Graph, p: &PebbleDistribution, keep: &[usize]) -> FoldedInstance {
        let n = g.vertex_count();
        let mut alive = vec![true; n];
        let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
        let mut counts = p.counts().to_vec();
        let mut keep_flag = vec![false; n];
        for &v in keep {
            keep_flag[v] = true;
        }
        let mut delivery_arcs = Vec::new();

        let mut queue: Vec<usize> = (0..n)
            .filter(|&v| degree[v] == 1 && !keep_flag[v])
            .collect();
        while let Some(u) = queue.pop() {
            if !alive[u] || degree[u] != 1 || keep_flag[u] {
                continue;
            }
            let v = *g
                .neighbors(u)
                .iter()
                .find(|&&w| alive[w])
                .expect("degree-1 vertex has a live neighbor");
            let moves = counts[u] / 2;
            if moves > 0 {
                delivery_arcs.push((u, v, moves));
                counts[v] += moves;
            }
            alive[u] = false;
            degree[v] -= 1;
            if degree[v] == 1 && !keep_flag[v] {
                queue.push(v);
            }
        }

        let mut core_of = vec![None; n];
        let mut original_of = Vec::new();
        for v in 0..n {
            if alive[v] {
                core_of[v] = Some(original_of.len());
                original_of.push(v);
            }
        }
        let edges: Vec<(usize, usize)> = g
            .edges()
            .filter_map(|(u, v)| Some((core_of[u]?, core_of[v]?)))
            .collect();
        let graph = Graph::new(original_of.len(), &edges).expect("core edges are valid");
        let core_counts = original_of.iter().map(|&v| counts[v]).collect();
        FoldedInstance {
            graph,
            counts: core_counts,
            core_of,
            original_of,
            delivery_arcs,
        }
    }

    /// Maps a signature on the core graph back to original vertex indices
    /// and prepends the delivery arcs that realized the folded counts.
    pub fn lift_signature(&self, core_sig: &Signature) -> Signature {
        let mut sig = Signature::new();
        for &(u, v, m) in &self.delivery_arcs {
            sig.add_arc(u, v, m).expect("delivery arcs are loop-free");
        }
        for ((u, v), m) in core_sig.arcs() {
            sig.add_arc(self.original_of[u], self.original_of[v], m)
                .expect("lifted arcs are loop-free");
        }
        sig
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folds_a_pendant_path_greedily() {
        // 0-1-2-3 path, keep vertex 3: everything folds into 3.
        let g = Graph::path(4);
        let p = PebbleDistribution::new(vec![9, 0, 1, 0]);
        let f = FoldedInstance::fold(&g, &p, &[3]);
        assert_eq!(f.graph.vertex_count(), 1);
        // floor(9/2)=4 onto 1, floor(4/2)=2 onto 2, floor(3/2)=1 onto 3.
        assert_eq!(f.counts, vec![1]);
        assert_eq!(
            f.delivery_arcs,
            vec![(0, 1, 4), (1, 2, 2), (2, 3, 1)]
        );
    }

    #[test]
    fn keeps_cycles_intact() {
        // Triangle with a pendant: only the pendant folds.
        let g = Graph::new(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let p = PebbleDistribution::new(vec![0, 0, 0, 5]);
        let f = FoldedInstance::fold(&g, &p, &[0]);
        assert_eq!(f.graph.vertex_count(), 3);
        assert_eq!(f.counts, vec![0, 0, 2]);
    }
}
