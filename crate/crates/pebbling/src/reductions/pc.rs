//! Reachability-to-coverability shift: bump every non-target count by one.
//! The target is reachable under `p` iff the shifted distribution covers
//! the unit distribution.

use crate::distribution::PebbleDistribution;
use crate::graph::Graph;

use super::{InstanceParams, PebblingInstance};

pub fn build_pc_instance(g: &Graph, p: &PebbleDistribution, r: usize) -> PebblingInstance {
    p.validate_for(g).expect("distribution length mismatch");
    assert!(r < g.vertex_count(), "target out of range");
    let mut q = p.clone();
    for v in 0..g.vertex_count() {
        if v != r {
            q.add(v, 1).expect("shifted counts stay in range");
        }
    }
    let labels = (0..g.vertex_count())
        .map(|v| if v == r { "r".to_string() } else { format!("v{v}") })
        .collect();
    PebblingInstance {
        graph: g.clone(),
        distribution: q,
        target: Some(r),
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
    fn shift_examples() {
        let g = Graph::complete(2);
        let p = PebbleDistribution::new(vec![2, 0]);
        let inst = build_pc_instance(&g, &p, 1);
        assert_eq!(inst.distribution.counts(), &[3, 0]);

        let g = Graph::path(3);
        let p = PebbleDistribution::new(vec![4, 0, 0]);
        let inst = build_pc_instance(&g, &p, 2);
        assert_eq!(inst.distribution.counts(), &[5, 1, 0]);
    }
}
