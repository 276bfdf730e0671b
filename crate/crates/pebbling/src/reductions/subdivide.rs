//! Edge subdivision with one-use paths: each edge becomes a path with
//! `alpha` internal vertices, each holding one pebble, so distances scale
//! by `1 + alpha` and, for large enough `alpha`, crossing a path twice is
//! impossible.

use crate::distribution::PebbleDistribution;
use crate::graph::Graph;

use super::{InstanceBuilder, InstanceParams, PebblingInstance};

#[derive(Debug, Clone)]
pub struct SubdividedInstance {
    pub instance: PebblingInstance,
    /// For each original edge (in sorted edge order), the full path
    /// `u, i_1, .., i_alpha, v` it became.
    pub path_of_edge: Vec<Vec<usize>>,
}

pub fn subdivide(g: &Graph, p: &PebbleDistribution, alpha: u32) -> SubdividedInstance {
    let labels: Vec<String> = (0..g.vertex_count()).map(|v| format!("v{v}")).collect();
    subdivide_labeled(g, p, alpha, &labels, None)
}

/// Subdivision with inherited labels and an optional target carried over.
pub fn subdivide_labeled(
    g: &Graph,
    p: &PebbleDistribution,
    alpha: u32,
    labels: &[String],
    target: Option<usize>,
) -> SubdividedInstance {
    p.validate_for(g).expect("distribution length mismatch");
    assert_eq!(labels.len(), g.vertex_count());

    let mut b = InstanceBuilder::new();
    for v in 0..g.vertex_count() {
        b.add_vertex(labels[v].clone(), p.count(v));
    }
    let mut path_of_edge = Vec::new();
    for (ei, (u, v)) in g.edges().enumerate() {
        let mut path = vec![u];
        let mut prev = u;
        for i in 1..=alpha {
            let mid = b.add_vertex(format!("s{ei}.{i}"), 1);
            b.add_edge(prev, mid);
            path.push(mid);
            prev = mid;
        }
        b.add_edge(prev, v);
        path.push(v);
        path_of_edge.push(path);
    }
    let (graph, distribution, labels) = b.build();
    let instance = PebblingInstance {
        graph,
        distribution,
        target,
        budget_k: None,
        labels,
        conforming: true,
        params: InstanceParams {
            alpha: Some(alpha as u64),
            ..InstanceParams::default()
        },
    };
    SubdividedInstance {
        instance,
        path_of_edge,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subdividing_k2_gives_a_path() {
        let g = Graph::complete(2);
        let p = PebbleDistribution::new(vec![2, 0]);
        let s = subdivide(&g, &p, 2);
        assert_eq!(s.instance.graph.vertex_count(), 4);
        assert_eq!(s.instance.graph.edge_count(), 3);
        assert_eq!(s.instance.distribution.counts(), &[2, 0, 1, 1]);
        assert_eq!(s.path_of_edge, vec![vec![0, 2, 3, 1]]);
    }

    #[test]
    fn alpha_zero_is_the_identity_on_the_graph() {
        let g = Graph::path(3);
        let p = PebbleDistribution::new(vec![1, 2, 3]);
        let s = subdivide(&g, &p, 0);
        assert_eq!(s.instance.graph, g);
        assert_eq!(s.instance.distribution, p);
    }

    #[test]
    fn distances_scale_by_one_plus_alpha() {
        let g = Graph::path(3);
        let p = PebbleDistribution::zeros(3);
        for alpha in [1u32, 3] {
            let s = subdivide(&g, &p, alpha);
            let d = s.instance.graph.distances_from(0);
            assert_eq!(d[2], Some(2 * (1 + alpha as usize)));
        }
    }

    #[test]
    fn vertex_count_formula() {
        let g = Graph::complete(4);
        let p = PebbleDistribution::zeros(4);
        let s = subdivide(&g, &p, 5);
        assert_eq!(
            s.instance.graph.vertex_count(),
            4 + 5 * g.edge_count()
        );
    }
}
