//! Reduction onto the optimal-pebbling-number question: attach one star per
//! pebble (a leaf identified with the pebbled vertex) and ask whether some
//! distribution of `m * 2^alpha` pebbles reaches every vertex of the result.

use std::collections::BTreeMap;

use crate::distribution::PebbleDistribution;
use crate::error::ReductionError;
use crate::graph::Graph;

use super::gadgets::{build_gadget, GadgetSpec};
use super::{InstanceBuilder, InstanceParams, PebblingInstance};

#[derive(Debug, Clone, Copy, Default)]
pub struct OpnParams {
    pub alpha: Option<u32>,
    pub beta: Option<u32>,
}

/// The prescribed parameters for `m` pebbles: the least `alpha` with
/// `2(m^2 + 1) <= 2^alpha`, then `beta = 2^alpha * m + 2`.
pub fn conforming_opn_params(m: u64) -> (u32, u64) {
    let need = 2 * (m * m + 1);
    let alpha = need.next_power_of_two().trailing_zeros();
    let beta = (1u64 << alpha) * m + 2;
    (alpha, beta)
}

#[derive(Debug, Clone)]
pub struct OpnInstance {
    pub instance: PebblingInstance,
    pub star_centers: Vec<usize>,
    pub alpha: u32,
    pub beta: u64,
    pub m: u64,
    /// `m * 2^alpha`: the bound the optimal pebbling number is tested at.
    pub k: u64,
}

pub fn build_opn_instance(
    g: &Graph,
    p: &PebbleDistribution,
    r: usize,
    params: OpnParams,
) -> Result<OpnInstance, ReductionError> {
    p.validate_for(g).expect("distribution length mismatch");
    assert!(r < g.vertex_count(), "target out of range");
    let m = p.size().expect("distribution size");
    let (alpha_c, beta_c) = conforming_opn_params(m);
    let conforming = params.alpha.is_none() && params.beta.is_none();
    let alpha = params.alpha.unwrap_or(alpha_c);
    let beta = params.beta.map(u64::from).unwrap_or(beta_c);
    if alpha < 1 || beta < 1 {
        return Err(ReductionError::InvalidSpec(
            "star parameters must be positive".to_string(),
        ));
    }
    let beta_u32 = u32::try_from(beta)
        .map_err(|_| ReductionError::InvalidSpec("beta too large to build".to_string()))?;
    let k = m
        .checked_shl(alpha)
        .ok_or_else(|| ReductionError::InvalidSpec("k overflows".to_string()))?;

    let mut b = InstanceBuilder::new();
    for v in 0..g.vertex_count() {
        let label = if v == r { "r".to_string() } else { format!("v{v}") };
        b.add_vertex(label, 0);
    }
    for (u, v) in g.edges() {
        b.add_edge(u, v);
    }

    let star = build_gadget(&GadgetSpec::star(alpha, beta_u32))?;
    let mut star_centers = Vec::new();
    let mut idx = 0;
    for u in 0..g.vertex_count() {
        for _ in 0..p.count(u) {
            let identify = BTreeMap::from([(star.attachments[0], u)]);
            let map = b.merge_graph(
                &star.graph,
                &star.labels,
                None,
                &format!("st{idx}."),
                &identify,
            );
            // The star's center is local vertex 0.
            star_centers.push(map[0]);
            idx += 1;
        }
    }

    let (graph, distribution, labels) = b.build();
    debug_assert!(distribution.size().unwrap() == 0);
    let instance = PebblingInstance {
        graph,
        distribution,
        target: None,
        budget_k: Some(k),
        labels,
        conforming,
        params: InstanceParams {
            alpha: Some(alpha as u64),
            beta: Some(beta),
            ..InstanceParams::default()
        },
    };
    Ok(OpnInstance {
        instance,
        star_centers,
        alpha,
        beta,
        m,
        k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conforming_parameter_formulas() {
        assert_eq!(conforming_opn_params(1), (2, 6));
        assert_eq!(conforming_opn_params(2), (4, 34));
    }

    #[test]
    fn one_pebble_instance_shape() {
        // A single vertex holding one pebble: the result is one star with
        // the host vertex as a leaf.
        let g = Graph::new(1, &[]).unwrap();
        let p = PebbleDistribution::new(vec![1]);
        let inst = build_opn_instance(
            &g,
            &p,
            0,
            OpnParams {
                alpha: Some(3),
                beta: Some(10),
            },
        )
        .unwrap();
        assert_eq!(inst.k, 8);
        assert_eq!(inst.instance.graph.vertex_count(), 1 + 30);
        assert_eq!(inst.star_centers.len(), 1);
        let center = inst.star_centers[0];
        assert_eq!(inst.instance.graph.degree(center), 10);
        assert!(!inst.instance.conforming);
    }

    #[test]
    fn star_count_matches_pebble_count() {
        let g = Graph::complete(2);
        let p = PebbleDistribution::new(vec![2, 0]);
        let inst = build_opn_instance(
            &g,
            &p,
            1,
            OpnParams {
                alpha: Some(2),
                beta: Some(3),
            },
        )
        .unwrap();
        assert_eq!(inst.star_centers.len(), 2);
        // 2 host vertices + 2 stars of (2*3+1 - 1) fresh vertices each.
        assert_eq!(inst.instance.graph.vertex_count(), 2 + 2 * 6);
    }
}
