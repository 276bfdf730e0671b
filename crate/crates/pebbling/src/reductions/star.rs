//! The star graph: every edge of `K_{1,beta}` stretched into a path of
//! length `alpha`, giving `alpha * beta` edges and `alpha * beta + 1`
//! vertices.

use crate::error::ReductionError;
use crate::graph::Graph;

use super::InstanceBuilder;

#[derive(Debug, Clone)]
pub struct StarGraph {
    pub graph: Graph,
    pub labels: Vec<String>,
    pub center: usize,
    pub leaves: Vec<usize>,
}

pub fn build_star(alpha: u32, beta: u32) -> Result<StarGraph, ReductionError> {
    if alpha < 1 || beta < 1 {
        return Err(ReductionError::InvalidSpec(format!(
            "star needs alpha >= 1 and beta >= 1, got ({alpha}, {beta})"
        )));
    }
    let mut b = InstanceBuilder::new();
    let center = b.add_vertex("center".to_string(), 0);
    let mut leaves = Vec::new();
    for arm in 0..beta {
        let leaf = b.add_path_to_new(
            center,
            alpha,
            &format!("arm{arm}"),
            format!("leaf{arm}"),
            0,
            0,
        );
        leaves.push(leaf);
    }
    let (graph, _, labels) = b.build();
    debug_assert_eq!(graph.edge_count(), (alpha * beta) as usize);
    debug_assert_eq!(graph.vertex_count(), (alpha * beta + 1) as usize);
    Ok(StarGraph {
        graph,
        labels,
        center,
        leaves,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_3_5_has_16_vertices_15_edges() {
        let s = build_star(3, 5).unwrap();
        assert_eq!(s.graph.vertex_count(), 16);
        assert_eq!(s.graph.edge_count(), 15);
        assert_eq!(s.leaves.len(), 5);
        for &l in &s.leaves {
            assert_eq!(s.graph.distances_from(s.center)[l], Some(3));
        }
    }

    #[test]
    fn degenerate_stars() {
        // alpha = 1 is the ordinary star.
        let s = build_star(1, 4).unwrap();
        assert_eq!(s.graph.degree(s.center), 4);
        // beta = 1 is a path.
        let s = build_star(5, 1).unwrap();
        assert_eq!(s.graph.vertex_count(), 6);
        assert_eq!(s.graph.max_degree(), 2);
        assert!(build_star(0, 3).is_err());
    }
}
