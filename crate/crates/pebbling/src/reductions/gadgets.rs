//! The attachment gadgets: null, fork, eye, and star.
//!
//! Shared contract: attachment vertices are later identified with vertices
//! of a host graph; overflow vertices get edges to the host target. Each
//! gadget carries one or more supply quotas (how many pebbles it must be
//! able to inject at each attachment) in bijection with critical
//! distributions (the adversarial loads it is certified under).
//!
//! Topologies (path lengths in edges):
//! - null: a path `v ~ w` of length `c`.
//! - fork: center `x` with pendant paths `x ~ u` (length `beta`) and
//!   `x ~ v`, `x ~ w` (length `c`).
//! - eye: hubs `h0..h3`; pendant paths `h_i ~ u_i` (length `beta`);
//!   attachment paths `h1 ~ v1`, `h3 ~ v3`, and both `h0 ~ v2`, `h2 ~ v2`
//!   (length `c`); overflow paths `h_i ~ w_{i-1}` and `h_i ~ w_i`
//!   (length `c`, indices mod 4). Deleting the four `w_j` leaves three
//!   components, with the `u0` and `u2` pendants together.
//! - star: one leaf is the attachment; no overflow vertices.

use crate::distribution::PebbleDistribution;
use crate::error::ReductionError;
use crate::graph::Graph;

use super::star::build_star;
use super::InstanceBuilder;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetKind {
    Null,
    Fork,
    Eye,
    Star,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GadgetSpec {
    pub kind: GadgetKind,
    /// Arm length for star gadgets.
    pub alpha: u32,
    /// Long-path length for fork/eye gadgets.
    pub beta: u32,
    /// Short-path length.
    pub c: u32,
}

impl GadgetSpec {
    pub fn null(c: u32) -> GadgetSpec {
        GadgetSpec {
            kind: GadgetKind::Null,
            alpha: 0,
            beta: 0,
            c,
        }
    }

    pub fn fork(beta: u32, c: u32) -> GadgetSpec {
        GadgetSpec {
            kind: GadgetKind::Fork,
            alpha: 0,
            beta,
            c,
        }
    }

    pub fn eye(beta: u32, c: u32) -> GadgetSpec {
        GadgetSpec {
            kind: GadgetKind::Eye,
            alpha: 0,
            beta,
            c,
        }
    }

    pub fn star(alpha: u32, beta: u32) -> GadgetSpec {
        GadgetSpec {
            kind: GadgetKind::Star,
            alpha,
            beta,
            c: 0,
        }
    }

    /// The unit load for fork/eye scaling: `2^(beta + c)`.
    pub fn load_unit(&self) -> u64 {
        1u64 << (self.beta + self.c)
    }
}

#[derive(Debug, Clone)]
pub struct Gadget {
    pub spec: GadgetSpec,
    pub graph: Graph,
    pub labels: Vec<String>,
    /// Attachment vertices in role order (eye: [v1, v2, v3]).
    pub attachments: Vec<usize>,
    pub overflow: Vec<usize>,
    /// Supply quotas, aligned with `attachments`.
    pub quotas: Vec<Vec<u64>>,
    /// Critical distributions, in bijection with `quotas`.
    pub criticals: Vec<PebbleDistribution>,
}

impl Gadget {
    pub fn critical_size(&self) -> u64 {
        self.criticals
            .first()
            .map(|q| q.size().expect("critical size"))
            .unwrap_or(0)
    }
}

pub fn build_gadget(spec: &GadgetSpec) -> Result<Gadget, ReductionError> {
    match spec.kind {
        GadgetKind::Null => build_null(spec),
        GadgetKind::Fork => build_fork(spec),
        GadgetKind::Eye => build_eye(spec),
        GadgetKind::Star => build_star_gadget(spec),
    }
}

fn check_lengths(spec: &GadgetSpec, need_beta: bool) -> Result<(), ReductionError> {
    if spec.c < 1 {
        return Err(ReductionError::InvalidSpec(
            "gadget paths need length >= 1".to_string(),
        ));
    }
    if need_beta && spec.beta < 1 {
        return Err(ReductionError::InvalidSpec(
            "gadget needs beta >= 1".to_string(),
        ));
    }
    if spec.beta as u64 + spec.c as u64 > 40 {
        return Err(ReductionError::InvalidSpec(
            "beta + c too large for 64-bit pebble counts".to_string(),
        ));
    }
    Ok(())
}

fn build_null(spec: &GadgetSpec) -> Result<Gadget, ReductionError> {
    check_lengths(spec, false)?;
    let mut b = InstanceBuilder::new();
    let v = b.add_vertex("v".to_string(), 0);
    let w = b.add_path_to_new(v, spec.c, "p", "w".to_string(), 0, 0);
    let (graph, _, labels) = b.build();
    let zeros = PebbleDistribution::zeros(graph.vertex_count());
    Ok(Gadget {
        spec: *spec,
        graph,
        labels,
        attachments: vec![v],
        overflow: vec![w],
        quotas: vec![vec![0]],
        criticals: vec![zeros],
    })
}

fn build_fork(spec: &GadgetSpec) -> Result<Gadget, ReductionError> {
    check_lengths(spec, true)?;
    let mut b = InstanceBuilder::new();
    let x = b.add_vertex("x".to_string(), 0);
    let u = b.add_path_to_new(x, spec.beta, "p1", "u".to_string(), 0, 0);
    let v = b.add_path_to_new(x, spec.c, "p2", "v".to_string(), 0, 0);
    let w = b.add_path_to_new(x, spec.c, "p3", "w".to_string(), 0, 0);
    let (graph, _, labels) = b.build();
    let mut critical = PebbleDistribution::zeros(graph.vertex_count());
    critical.set(u, 2 * spec.load_unit() - 1);
    Ok(Gadget {
        spec: *spec,
        graph,
        labels,
        attachments: vec![v],
        overflow: vec![w],
        quotas: vec![vec![1]],
        criticals: vec![critical],
    })
}

fn build_eye(spec: &GadgetSpec) -> Result<Gadget, ReductionError> {
    check_lengths(spec, true)?;
    let mut b = InstanceBuilder::new();
    let hubs: Vec<usize> = (0..4)
        .map(|i| b.add_vertex(format!("h{i}"), 0))
        .collect();
    let us: Vec<usize> = (0..4)
        .map(|i| b.add_path_to_new(hubs[i], spec.beta, &format!("p{i}"), format!("u{i}"), 0, 0))
        .collect();
    let v1 = b.add_path_to_new(hubs[1], spec.c, "a1", "v1".to_string(), 0, 0);
    let v3 = b.add_path_to_new(hubs[3], spec.c, "a3", "v3".to_string(), 0, 0);
    let v2 = b.add_path_to_new(hubs[0], spec.c, "a2l", "v2".to_string(), 0, 0);
    b.connect_with_path(hubs[2], v2, spec.c, "a2r", 0);
    let ws: Vec<usize> = (0..4)
        .map(|j| b.add_vertex(format!("w{j}"), 0))
        .collect();
    for i in 0..4usize {
        // h_i reaches the two overflow vertices w_{i-1} and w_i.
        let prev = (i + 3) % 4;
        b.connect_with_path(hubs[i], ws[prev], spec.c, &format!("o{i}l"), 0);
        b.connect_with_path(hubs[i], ws[i], spec.c, &format!("o{i}r"), 0);
    }
    let (graph, _, labels) = b.build();

    let unit = spec.load_unit();
    let heavy = 2 * unit - 1;
    let light = unit - 1;
    let mut q_pos = PebbleDistribution::zeros(graph.vertex_count());
    let mut q_neg = PebbleDistribution::zeros(graph.vertex_count());
    q_pos.set(us[1], heavy);
    q_pos.set(us[3], heavy);
    q_pos.set(us[0], light);
    q_pos.set(us[2], light);
    q_neg.set(us[1], light);
    q_neg.set(us[3], light);
    q_neg.set(us[0], heavy);
    q_neg.set(us[2], heavy);
    debug_assert_eq!(q_pos.size().unwrap(), 6 * unit - 4);
    debug_assert_eq!(q_neg.size().unwrap(), 6 * unit - 4);

    Ok(Gadget {
        spec: *spec,
        graph,
        labels,
        attachments: vec![v1, v2, v3],
        overflow: ws,
        // Positive quota then negative quota, matching the criticals.
        quotas: vec![vec![1, 0, 1], vec![0, 2, 0]],
        criticals: vec![q_pos, q_neg],
    })
}

fn build_star_gadget(spec: &GadgetSpec) -> Result<Gadget, ReductionError> {
    let star = build_star(spec.alpha, spec.beta)?;
    let mut critical = PebbleDistribution::zeros(star.graph.vertex_count());
    if spec.alpha >= 63 {
        return Err(ReductionError::InvalidSpec(
            "alpha too large for 64-bit pebble counts".to_string(),
        ));
    }
    critical.set(star.center, 1u64 << spec.alpha);
    Ok(Gadget {
        spec: *spec,
        graph: star.graph,
        labels: star.labels,
        attachments: vec![star.leaves[0]],
        overflow: Vec::new(),
        quotas: vec![vec![1]],
        criticals: vec![critical],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_gadget_is_a_path() {
        let g = build_gadget(&GadgetSpec::null(3)).unwrap();
        assert_eq!(g.graph.vertex_count(), 4);
        assert_eq!(g.graph.max_degree(), 2);
        assert_eq!(g.critical_size(), 0);
    }

    #[test]
    fn fork_is_a_tree_with_the_right_critical() {
        let g = build_gadget(&GadgetSpec::fork(2, 2)).unwrap();
        assert!(g.graph.is_tree());
        assert_eq!(g.graph.vertex_count(), 7);
        assert_eq!(g.critical_size(), 31);
        let u = g.labels.iter().position(|l| l == "u").unwrap();
        assert_eq!(g.criticals[0].count(u), 31);
    }

    #[test]
    fn eye_component_structure() {
        let g = build_gadget(&GadgetSpec::eye(2, 2)).unwrap();
        assert_eq!(g.graph.vertex_count(), 31);
        assert_eq!(g.critical_size(), 92);
        // Delete the overflow vertices: three components remain, with the
        // u0 and u2 pendants in the same one.
        let dead: Vec<usize> = g.overflow.clone();
        let keep: Vec<usize> = (0..g.graph.vertex_count())
            .filter(|v| !dead.contains(v))
            .collect();
        let mut comp_of = vec![usize::MAX; g.graph.vertex_count()];
        let mut comps = 0;
        for &start in &keep {
            if comp_of[start] != usize::MAX {
                continue;
            }
            comps += 1;
            let mut stack = vec![start];
            comp_of[start] = comps;
            while let Some(x) = stack.pop() {
                for &y in g.graph.neighbors(x) {
                    if !dead.contains(&y) && comp_of[y] == usize::MAX {
                        comp_of[y] = comps;
                        stack.push(y);
                    }
                }
            }
        }
        assert_eq!(comps, 3);
        let u0 = g.labels.iter().position(|l| l == "u0").unwrap();
        let u2 = g.labels.iter().position(|l| l == "u2").unwrap();
        assert_eq!(comp_of[u0], comp_of[u2]);
        let u1 = g.labels.iter().position(|l| l == "u1").unwrap();
        assert_ne!(comp_of[u0], comp_of[u1]);
    }

    #[test]
    fn eye_quota_bijection() {
        let g = build_gadget(&GadgetSpec::eye(1, 1)).unwrap();
        assert_eq!(g.quotas.len(), g.criticals.len());
        assert_eq!(g.quotas[0], vec![1, 0, 1]);
        assert_eq!(g.quotas[1], vec![0, 2, 0]);
    }

    #[test]
    fn star_gadget_attaches_at_a_leaf() {
        let g = build_gadget(&GadgetSpec::star(2, 3)).unwrap();
        assert_eq!(g.attachments.len(), 1);
        assert_eq!(g.graph.degree(g.attachments[0]), 1);
        assert_eq!(g.critical_size(), 4);
    }
}
