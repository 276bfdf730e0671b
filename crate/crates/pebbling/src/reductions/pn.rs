//! Rooted-to-unrooted pebbling-number reduction: enough copies of the graph
//! glued at the root make the root's pebbling question dominate everyone
//! else's.

use std::collections::BTreeMap;

use crate::graph::Graph;

use super::{InstanceBuilder, InstanceParams, PebblingInstance};

#[derive(Debug, Clone)]
pub struct PnInstance {
    pub instance: PebblingInstance,
    /// Number of glued copies.
    pub copies: u64,
    pub k_prime: u64,
    /// Whether the diameter precondition `diam(g) <= c' * lg n(g)` held.
    pub diameter_ok: bool,
    /// Shared root in the output graph.
    pub r: usize,
    /// Vertex maps, one per copy (copy-local original index -> output index).
    pub copy_maps: Vec<Vec<usize>>,
}

pub fn build_pn_instance(g: &Graph, r: usize, k: u64, c_prime: u32) -> PnInstance {
    assert!(r < g.vertex_count(), "target out of range");
    assert!(k >= 1);
    let n = g.vertex_count() as u64;
    let diameter_ok = match g.diameter() {
        Some(d) => (d as f64) <= c_prime as f64 * (n as f64).log2(),
        None => false,
    };
    let alpha = k
        .checked_mul(n.checked_pow(c_prime).expect("n^c' fits in u64"))
        .expect("copy count fits in u64");
    let k_prime = alpha.checked_mul(k).expect("k' fits in u64");
    let copies = usize::try_from(alpha).expect("desk-scale copy count");

    let labels: Vec<String> = (0..g.vertex_count()).map(|v| format!("v{v}")).collect();
    let mut b = InstanceBuilder::new();
    let shared_r = b.add_vertex("r".to_string(), 0);
    let mut copy_maps = Vec::with_capacity(copies);
    for t in 0..copies {
        let identify = BTreeMap::from([(r, shared_r)]);
        let map = b.merge_graph(g, &labels, None, &format!("c{t}."), &identify);
        copy_maps.push(map);
    }
    let (graph, distribution, labels) = b.build();
    let instance = PebblingInstance {
        graph,
        distribution,
        target: None,
        budget_k: Some(k_prime),
        labels,
        conforming: diameter_ok,
        params: InstanceParams {
            c_prime: Some(c_prime as u64),
            ..InstanceParams::default()
        },
    };
    PnInstance {
        instance,
        copies: alpha,
        k_prime,
        diameter_ok,
        r: shared_r,
        copy_maps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_copies_of_k2() {
        // k=1, n=2, c'=1: two copies of K2 sharing r, k' = 2.
        let g = Graph::complete(2);
        let inst = build_pn_instance(&g, 1, 1, 1);
        assert_eq!(inst.copies, 2);
        assert_eq!(inst.k_prime, 2);
        assert_eq!(inst.instance.graph.vertex_count(), 3);
        assert!(inst.diameter_ok);
    }

    #[test]
    fn vertex_count_formula() {
        let g = Graph::path(3);
        // r is an endpoint, so each copy of g - r stays connected.
        let inst = build_pn_instance(&g, 0, 2, 1);
        let alpha = inst.copies as usize;
        assert_eq!(
            inst.instance.graph.vertex_count(),
            alpha * (g.vertex_count() - 1) + 1
        );
        // Removing r leaves one copy of g - r per copy.
        let r = inst.r;
        let alive: Vec<usize> = (0..inst.instance.graph.vertex_count())
            .filter(|&v| v != r)
            .collect();
        let mut seen = vec![false; inst.instance.graph.vertex_count()];
        let mut comps = 0;
        for &s in &alive {
            if seen[s] {
                continue;
            }
            comps += 1;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(x) = stack.pop() {
                for &y in inst.instance.graph.neighbors(x) {
                    if y != r && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        assert_eq!(comps, alpha);
    }
}
