//! The greedy strategy on trees. A greedy move sends pebbles strictly
//! toward the target; on a tree, exhausting greedy moves attains the true
//! maximum, so the deliverable count folds up the tree in one pass.

use crate::distribution::PebbleDistribution;
use crate::error::SolverError;
use crate::graph::Graph;

/// Maximum number of pebbles placeable on `r` in a tree, via the greedy
/// strategy: each subtree delivers `floor(deliverable/2)` across the edge
/// toward the target.
pub fn greedy_tree_max(t: &Graph, p: &PebbleDistribution, r: usize) -> Result<u64, SolverError> {
    if !t.is_tree() {
        return Err(SolverError::NotATree);
    }
    p.validate_for(t).expect("distribution length mismatch");
    assert!(r < t.vertex_count(), "target out of range");

    // Iterative post-order from r.
    let n = t.vertex_count();
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![r];
    let mut seen = vec![false; n];
    seen[r] = true;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &w in t.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                stack.push(w);
            }
        }
    }
    let mut deliver: Vec<u128> = p.counts().iter().map(|&c| c as u128).collect();
    for &v in order.iter().rev() {
        if v != r {
            let d = deliver[v] / 2;
            deliver[parent[v]] += d;
        }
    }
    Ok(u64::try_from(deliver[r]).expect("deliverable count fits in u64"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(counts: &[u64]) -> PebbleDistribution {
        PebbleDistribution::new(counts.to_vec())
    }

    #[test]
    fn greedy_on_paths_and_stars() {
        let p3 = Graph::path(3);
        assert_eq!(greedy_tree_max(&p3, &dist(&[4, 0, 0]), 2), Ok(1));

        // Star with two pebbles on each leaf, target a leaf: the other two
        // leaves each send one to the hub, the hub sends one on, and the
        // target keeps its own two. 2 + 1 = 3.
        let star = Graph::star(3);
        let p = dist(&[0, 2, 2, 2]);
        assert_eq!(greedy_tree_max(&star, &p, 1), Ok(3));
    }

    #[test]
    fn pebbles_on_target_stay_put() {
        let p3 = Graph::path(3);
        assert_eq!(greedy_tree_max(&p3, &dist(&[0, 0, 5]), 2), Ok(5));
    }

    #[test]
    fn rejects_non_trees() {
        let c3 = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(
            greedy_tree_max(&c3, &dist(&[2, 0, 0]), 2),
            Err(SolverError::NotATree)
        );
    }
}
