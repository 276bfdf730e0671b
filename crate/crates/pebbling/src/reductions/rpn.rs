//! The quantified-formula reduction onto the rooted pebbling-number
//! question.
//!
//! From a canonical formula with a universal/existential split:
//! - the base graph is the formula graph with each universal variable
//!   gadget stripped of its two internal edges and one pebble removed from
//!   each endpoint;
//! - the underlying graph stretches every edge into a one-use path;
//! - one fork per base pebble, one eye per universal variable (attached at
//!   the positive/negative occurrence vertices), and a null on every other
//!   non-target vertex, with all overflow vertices wired to the target;
//! - the budget is the total size of the gadgets' critical distributions.
//!
//! Settings of the universal variables correspond to boosted distributions
//! on the base graphs (one extra pebble on each positive-occurrence vertex
//! for true, two on the negative-occurrence vertex for false) and to
//! critical-distribution selections on the output graph.

use std::collections::BTreeMap;

use crate::cnf::QuantifiedCnf;
use crate::distribution::PebbleDistribution;
use crate::error::ReductionError;
use crate::graph::Graph;

use super::gadgets::{build_gadget, Gadget, GadgetKind, GadgetSpec};
use super::gnpr::build_gnpr;
use super::subdivide::subdivide_labeled;
use super::{InstanceBuilder, InstanceParams, PebblingInstance};

#[derive(Debug, Clone, Copy, Default)]
pub struct RpnParams {
    pub alpha: Option<u32>,
    pub beta: Option<u32>,
    pub c: Option<u32>,
    /// Gap constant feeding the conforming `beta` formula; required when
    /// `beta` is not overridden.
    pub gap_constant: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct AttachedGadget {
    pub gadget: Gadget,
    /// Gadget-local vertex -> output-graph vertex.
    pub to_h: Vec<usize>,
    /// The universal variable an eye stands for.
    pub universal_var: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct RpnInstance {
    /// The output: empty distribution, target `r`, budget `k`.
    pub instance: PebblingInstance,
    /// Base graph (stripped formula graph) with its distribution.
    pub g1: PebblingInstance,
    /// Underlying graph (subdivided base) with its distribution.
    pub g2: PebblingInstance,
    pub alpha: u32,
    pub beta: u32,
    pub c: u32,
    pub r: usize,
    /// Variable -> gadget vertices [v1, v2, v3]; the same indices are valid
    /// in the base, underlying, and output graphs.
    pub var_vertices: BTreeMap<usize, [usize; 3]>,
    pub universal_vars: Vec<usize>,
    pub gadgets: Vec<AttachedGadget>,
}

pub fn build_rpn_instance(
    f: &QuantifiedCnf,
    params: RpnParams,
) -> Result<RpnInstance, ReductionError> {
    if let Some(violation) = f.canonical_violation() {
        return Err(ReductionError::NotCanonical(violation));
    }
    let universal_vars: Vec<usize> = f
        .appearing_vars()
        .into_iter()
        .filter(|v| f.is_universal(*v))
        .collect();
    for &x in &universal_vars {
        let (pos, neg) = f.occurrences(x);
        if (pos, neg) != (2, 1) {
            return Err(ReductionError::NotCanonical(format!(
                "universal x{x} must occur twice positively and once negatively, has ({pos},{neg})"
            )));
        }
    }

    // Base graph: drop each universal gadget's internal edges and one
    // pebble from each of its endpoints.
    let gnpr = build_gnpr(f)?;
    let var_vertices = gnpr.var_vertices.clone();
    let base = &gnpr.instance;
    let mut dropped: Vec<(usize, usize)> = Vec::new();
    for &x in &universal_vars {
        let [v1, v2, v3] = var_vertices[&x];
        dropped.push((v1.min(v2), v1.max(v2)));
        dropped.push((v2.min(v3), v2.max(v3)));
    }
    let g1_edges: Vec<(usize, usize)> = base
        .graph
        .edges()
        .filter(|e| !dropped.contains(e))
        .collect();
    let g1_graph = Graph::new(base.graph.vertex_count(), &g1_edges).expect("base edges valid");
    let mut p1 = base.distribution.clone();
    for &x in &universal_vars {
        let [v1, _, v3] = var_vertices[&x];
        p1.sub(v1, 1).expect("endpoint holds a pebble");
        p1.sub(v3, 1).expect("endpoint holds a pebble");
    }
    let r = base.target.expect("formula graph has a target");

    // Stretch factor: every boosted distribution has the same size.
    let t = p1.size().expect("size") + 2 * universal_vars.len() as u64;
    let e1 = g1_graph.edge_count();
    let conforming_alpha = f64::max(
        (2.0 * t as f64).log2(),
        4.0 * (e1 as f64).log2(),
    )
    .ceil()
    .max(1.0) as u32;
    let alpha = params.alpha.unwrap_or(conforming_alpha);

    let sub = subdivide_labeled(&g1_graph, &p1, alpha, &base.labels, Some(r));
    let g2 = sub.instance;
    let n2 = g2.graph.vertex_count() as u64;

    let c = params.c.unwrap_or(3);
    let beta = match params.beta {
        Some(b) => b,
        None => {
            let gap = params.gap_constant.ok_or_else(|| {
                ReductionError::InvalidSpec(
                    "conforming beta needs the certified gap constant".to_string(),
                )
            })?;
            let x = 3u64
                .checked_mul(gap)
                .and_then(|v| v.checked_mul(n2))
                .ok_or_else(|| ReductionError::InvalidSpec("beta formula overflows".to_string()))?;
            x.next_power_of_two().trailing_zeros().max(1)
        }
    };
    let conforming = params.alpha.is_none() && params.beta.is_none() && params.c.is_none();

    // Assemble the output graph: underlying graph first (indices
    // preserved), then gadget internals grouped per gadget.
    let mut b = InstanceBuilder::new();
    for v in 0..g2.graph.vertex_count() {
        b.add_vertex(g2.labels[v].clone(), 0);
    }
    for (u, v) in g2.graph.edges() {
        b.add_edge(u, v);
    }

    let fork = build_gadget(&GadgetSpec::fork(beta, c))?;
    let eye = build_gadget(&GadgetSpec::eye(beta, c))?;
    let null = build_gadget(&GadgetSpec::null(c))?;

    let mut gadgets: Vec<AttachedGadget> = Vec::new();
    let mut has_gadget = vec![false; g2.graph.vertex_count()];
    let mut attach = |b: &mut InstanceBuilder,
                      gadget: &Gadget,
                      identify: BTreeMap<usize, usize>,
                      prefix: String,
                      var: Option<usize>,
                      has_gadget: &mut Vec<bool>| {
        for &host in identify.values() {
            has_gadget[host] = true;
        }
        let to_h = b.merge_graph(&gadget.graph, &gadget.labels, None, &prefix, &identify);
        gadgets.push(AttachedGadget {
            gadget: gadget.clone(),
            to_h,
            universal_var: var,
        });
    };

    // One fork per pebble of the underlying distribution.
    let mut fork_idx = 0;
    for z in 0..g2.graph.vertex_count() {
        for _ in 0..g2.distribution.count(z) {
            let identify = BTreeMap::from([(fork.attachments[0], z)]);
            attach(
                &mut b,
                &fork,
                identify,
                format!("fork{fork_idx}."),
                None,
                &mut has_gadget,
            );
            fork_idx += 1;
        }
    }
    // One eye per universal variable, attached at its occurrence vertices.
    for (i, &x) in universal_vars.iter().enumerate() {
        let [z1, z2, z3] = var_vertices[&x];
        let identify = BTreeMap::from([
            (eye.attachments[0], z1),
            (eye.attachments[1], z2),
            (eye.attachments[2], z3),
        ]);
        attach(
            &mut b,
            &eye,
            identify,
            format!("eye{i}."),
            Some(x),
            &mut has_gadget,
        );
    }
    // A null on every remaining non-target vertex.
    let mut null_idx = 0;
    for z in 0..g2.graph.vertex_count() {
        if z != r && !has_gadget[z] {
            let identify = BTreeMap::from([(null.attachments[0], z)]);
            attach(
                &mut b,
                &null,
                identify,
                format!("null{null_idx}."),
                None,
                &mut has_gadget,
            );
            null_idx += 1;
        }
    }
    // Wire every overflow vertex to the target.
    for ag in &gadgets {
        for &w in &ag.gadget.overflow {
            b.add_edge(ag.to_h[w], r);
        }
    }

    let mut k: u64 = 0;
    for ag in &gadgets {
        k = k
            .checked_add(ag.gadget.critical_size())
            .ok_or_else(|| ReductionError::InvalidSpec("budget k overflows".to_string()))?;
    }

    let (graph, distribution, labels) = b.build();
    let instance = PebblingInstance {
        graph,
        distribution,
        target: Some(r),
        budget_k: Some(k),
        labels,
        conforming,
        params: InstanceParams {
            alpha: Some(alpha as u64),
            beta: Some(beta as u64),
            c: Some(c as u64),
            ..InstanceParams::default()
        },
    };
    instance.assert_labels_consistent();

    Ok(RpnInstance {
        instance,
        g1: PebblingInstance {
            graph: g1_graph,
            distribution: p1,
            target: Some(r),
            budget_k: None,
            labels: base.labels.clone(),
            conforming: true,
            params: InstanceParams::default(),
        },
        g2,
        alpha,
        beta,
        c,
        r,
        var_vertices,
        universal_vars,
        gadgets,
    })
}

impl RpnInstance {
    fn boosted(&self, base: &PebbleDistribution, f: &BTreeMap<usize, bool>) -> PebbleDistribution {
        let mut p = base.clone();
        for &x in &self.universal_vars {
            let [v1, v2, v3] = self.var_vertices[&x];
            if *f.get(&x).expect("assignment covers every universal variable") {
                p.add(v1, 1).expect("no overflow");
                p.add(v3, 1).expect("no overflow");
            } else {
                p.add(v2, 2).expect("no overflow");
            }
        }
        p
    }

    /// Base-graph distribution for a setting of the universal variables.
    pub fn p1f(&self, f: &BTreeMap<usize, bool>) -> PebbleDistribution {
        self.boosted(&self.g1.distribution, f)
    }

    /// Underlying-graph distribution for a setting of the universal
    /// variables.
    pub fn p2f(&self, f: &BTreeMap<usize, bool>) -> PebbleDistribution {
        self.boosted(&self.g2.distribution, f)
    }

    /// The adversarial load on the output graph for a universal setting:
    /// each gadget takes its critical distribution, eyes choosing by the
    /// variable's truth value.
    pub fn critical_selection(&self, f: &BTreeMap<usize, bool>) -> PebbleDistribution {
        let mut p = PebbleDistribution::zeros(self.instance.graph.vertex_count());
        for ag in &self.gadgets {
            let critical = match ag.universal_var {
                None => &ag.gadget.criticals[0],
                Some(x) => {
                    if *f.get(&x).expect("assignment covers every universal variable") {
                        &ag.gadget.criticals[0]
                    } else {
                        &ag.gadget.criticals[1]
                    }
                }
            };
            for v in 0..critical.len() {
                let cnt = critical.count(v);
                if cnt > 0 {
                    p.add(ag.to_h[v], cnt).expect("no overflow");
                }
            }
        }
        p
    }

    /// How many gadgets touch each underlying vertex.
    pub fn gadgets_per_vertex(&self) -> Vec<usize> {
        let n2 = self.g2.graph.vertex_count();
        let mut histogram = vec![0usize; n2];
        for ag in &self.gadgets {
            for &a in &ag.gadget.attachments {
                let host = ag.to_h[a];
                if host < n2 {
                    histogram[host] += 1;
                }
            }
        }
        histogram
    }

    pub fn eye_count(&self) -> usize {
        self.gadgets
            .iter()
            .filter(|g| g.gadget.spec.kind == GadgetKind::Eye)
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Lit;

    fn one_universal_formula() -> QuantifiedCnf {
        // (x | y) & (x | !y) & (!x | y): x universal (2 pos + 1 neg),
        // y existential. Valid: y := x works for both settings.
        QuantifiedCnf::with_universal(
            2,
            [0],
            vec![
                vec![Lit::pos(0), Lit::pos(1)],
                vec![Lit::pos(0), Lit::neg(1)],
                vec![Lit::neg(0), Lit::pos(1)],
            ],
        )
    }

    #[test]
    fn builds_with_overrides() {
        let f = one_universal_formula();
        assert!(f.is_canonical());
        let inst = build_rpn_instance(
            &f,
            RpnParams {
                alpha: Some(2),
                beta: Some(2),
                c: Some(2),
                gap_constant: None,
            },
        )
        .unwrap();
        assert!(!inst.instance.conforming);
        assert_eq!(inst.eye_count(), 1);
        // Base graph lost the two universal gadget edges.
        let [v1, v2, v3] = inst.var_vertices[&0];
        assert!(!inst.g1.graph.has_edge(v1, v2));
        assert!(!inst.g1.graph.has_edge(v2, v3));
        assert_eq!(inst.g1.distribution.count(v1), 1);
        assert_eq!(inst.g1.distribution.count(v3), 1);

        // Boosted distributions.
        let t = BTreeMap::from([(0usize, true)]);
        let ft = inst.p1f(&t);
        assert_eq!(ft.count(v1), 2);
        assert_eq!(ft.count(v2), 0);
        let fl = inst.p1f(&BTreeMap::from([(0usize, false)]));
        assert_eq!(fl.count(v1), 1);
        assert_eq!(fl.count(v2), 2);
        assert_eq!(ft.size().unwrap(), fl.size().unwrap());

        // Every vertex has at most two pebbles under any boost.
        assert!(inst.p2f(&t).counts().iter().all(|&c| c <= 2));

        // k = forks * (2*2^(beta+c) - 1) + eyes * (6*2^(beta+c) - 4).
        let forks = inst
            .gadgets
            .iter()
            .filter(|g| g.gadget.spec.kind == GadgetKind::Fork)
            .count() as u64;
        let expected_k = forks * 31 + 92;
        assert_eq!(inst.instance.budget_k, Some(expected_k));

        // Critical selections have size k and vanish on the underlying
        // graph.
        let sel = inst.critical_selection(&t);
        assert_eq!(sel.size().unwrap(), expected_k);
        for v in 0..inst.g2.graph.vertex_count() {
            assert_eq!(sel.count(v), 0);
        }
    }

    #[test]
    fn at_most_two_gadgets_per_vertex() {
        let f = one_universal_formula();
        let inst = build_rpn_instance(
            &f,
            RpnParams {
                alpha: Some(2),
                beta: Some(1),
                c: Some(1),
                gap_constant: None,
            },
        )
        .unwrap();
        let hist = inst.gadgets_per_vertex();
        assert!(hist.iter().all(|&h| h <= 2));
        // Every non-target underlying vertex is touched by some gadget.
        for v in 0..inst.g2.graph.vertex_count() {
            if v != inst.r {
                assert!(hist[v] >= 1);
            }
        }
        assert_eq!(hist[inst.r], 0);
    }

    #[test]
    fn rejects_universal_with_single_positive() {
        // x universal with occurrences (1,1).
        let f = QuantifiedCnf::with_universal(
            2,
            [0],
            vec![
                vec![Lit::pos(0), Lit::pos(1)],
                vec![Lit::neg(0), Lit::neg(1)],
            ],
        );
        assert!(matches!(
            build_rpn_instance(&f, RpnParams::default()),
            Err(ReductionError::NotCanonical(_))
        ));
    }
}
