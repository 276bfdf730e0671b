//! Hamiltonian path as an annihilation question: add an apex adjacent to
//! everything, give it two pebbles and everyone else one. Burning down to a
//! single pebble forces a walk that uses each vertex exactly once.

use crate::graph::Graph;

use super::{InstanceBuilder, InstanceParams, PebblingInstance};

pub fn build_annihilation_from_hampath(g: &Graph) -> PebblingInstance {
    assert!(g.vertex_count() >= 1);
    let mut b = InstanceBuilder::new();
    for v in 0..g.vertex_count() {
        b.add_vertex(format!("v{v}"), 1);
    }
    for (u, v) in g.edges() {
        b.add_edge(u, v);
    }
    let apex = b.add_vertex("apex".to_string(), 2);
    for v in 0..g.vertex_count() {
        b.add_edge(apex, v);
    }
    let (graph, distribution, labels) = b.build();
    PebblingInstance {
        graph,
        distribution,
        target: None,
        budget_k: None,
        labels,
        conforming: true,
        params: InstanceParams::default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apex_instance_shape() {
        let inst = build_annihilation_from_hampath(&Graph::complete(3));
        assert_eq!(inst.graph.vertex_count(), 4);
        assert_eq!(inst.distribution.counts(), &[1, 1, 1, 2]);
        assert_eq!(inst.graph.degree(3), 3);
        assert_eq!(inst.distribution.size().unwrap(), 5);
    }
}
