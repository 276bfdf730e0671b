//! Instance generators: formula-to-graph constructions, gadget graphs, and
//! the instance transformations between the pebbling decision problems.

mod gadgets;
mod gnpr;
mod gpr;
mod hampath;
mod opn;
mod pc;
mod pn;
mod rpn;
mod star;
mod subdivide;

pub use gadgets::{build_gadget, Gadget, GadgetKind, GadgetSpec};
pub use gnpr::{build_gnpr, GnprInstance};
pub use gpr::{build_gpr, conforming_gpr_alpha, GprInstance};
pub use hampath::build_annihilation_from_hampath;
pub use opn::{build_opn_instance, conforming_opn_params, OpnInstance, OpnParams};
pub use pc::build_pc_instance;
pub use pn::{build_pn_instance, PnInstance};
pub use rpn::{build_rpn_instance, AttachedGadget, RpnInstance, RpnParams};
pub use star::{build_star, StarGraph};
pub use subdivide::{subdivide, subdivide_labeled, SubdividedInstance};

use serde::Serialize;

use crate::distribution::PebbleDistribution;
use crate::graph::Graph;

/// The output shape of every reduction: a graph, a starting distribution,
/// an optional target, an optional pebble budget, and a total, unique label
/// per vertex. `conforming` records whether the construction used its
/// prescribed parameter formulas or a desk-scale override.
#[derive(Debug, Clone)]
pub struct PebblingInstance {
    pub graph: Graph,
    pub distribution: PebbleDistribution,
    pub target: Option<usize>,
    pub budget_k: Option<u64>,
    pub labels: Vec<String>,
    pub conforming: bool,
    pub params: InstanceParams,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct InstanceParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_prime: Option<u64>,
}

#[derive(Serialize)]
struct MetadataRecord<'a> {
    #[serde(flatten)]
    params: &'a InstanceParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<u64>,
    conforming: bool,
}

impl PebblingInstance {
    /// One JSON line of construction metadata.
    pub fn metadata_json(&self) -> String {
        let record = MetadataRecord {
            params: &self.params,
            k: self.budget_k,
            conforming: self.conforming,
        };
        serde_json::to_string(&record).expect("metadata serializes")
    }

    pub fn assert_labels_consistent(&self) {
        assert_eq!(self.labels.len(), self.graph.vertex_count());
        let mut sorted = self.labels.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), self.labels.len(), "labels must be unique");
        if let Some(r) = self.target {
            assert_eq!(self.labels[r], "r");
        }
    }
}

/// Incremental construction of a labeled, pebbled graph.
#[derive(Debug, Default)]
pub(crate) struct InstanceBuilder {
    edges: Vec<(usize, usize)>,
    labels: Vec<String>,
    counts: Vec<u64>,
}

impl InstanceBuilder {
    pub fn new() -> InstanceBuilder {
        InstanceBuilder::default()
    }

    pub fn add_vertex(&mut self, label: String, pebbles: u64) -> usize {
        self.labels.push(label);
        self.counts.push(pebbles);
        self.labels.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.edges.push((u, v));
    }

    /// Adds a path of `len` edges from `from` to a fresh endpoint, with
    /// `len - 1` fresh internal vertices. Labels take `{prefix}.{i}` for the
    /// internals and `end_label` for the endpoint.
    pub fn add_path_to_new(
        &mut self,
        from: usize,
        len: u32,
        prefix: &str,
        end_label: String,
        internal_pebbles: u64,
        end_pebbles: u64,
    ) -> usize {
        assert!(len >= 1);
        let mut prev = from;
        for i in 1..len {
            let mid = self.add_vertex(format!("{prefix}.{i}"), internal_pebbles);
            self.add_edge(prev, mid);
            prev = mid;
        }
        let end = self.add_vertex(end_label, end_pebbles);
        self.add_edge(prev, end);
        end
    }

    /// Adds a path of `len` edges between two existing vertices.
    pub fn connect_with_path(
        &mut self,
        from: usize,
        to: usize,
        len: u32,
        prefix: &str,
        internal_pebbles: u64,
    ) {
        assert!(len >= 1);
        let mut prev = from;
        for i in 1..len {
            let mid = self.add_vertex(format!("{prefix}.{i}"), internal_pebbles);
            self.add_edge(prev, mid);
            prev = mid;
        }
        self.add_edge(prev, to);
    }

    pub fn build(self) -> (Graph, PebbleDistribution, Vec<String>) {
        let n = self.labels.len();
        let graph = Graph::new(n, &self.edges).expect("builder produces valid graphs");
        (graph, PebbleDistribution::new(self.counts), self.labels)
    }

    /// Merges another labeled graph into the builder. `identify` maps local
    /// vertices onto existing builder vertices (which keep their labels and
    /// pebbles); all other vertices become fresh, labeled
    /// `{prefix}{local label}`. Returns the local-to-builder vertex map.
    pub fn merge_graph(
        &mut self,
        g: &Graph,
        labels: &[String],
        counts: Option<&PebbleDistribution>,
        prefix: &str,
        identify: &std::collections::BTreeMap<usize, usize>,
    ) -> Vec<usize> {
        let mut map = Vec::with_capacity(g.vertex_count());
        for v in 0..g.vertex_count() {
            match identify.get(&v) {
                Some(&host) => map.push(host),
                None => {
                    let pebbles = counts.map_or(0, |p| p.count(v));
                    let idx = self.add_vertex(format!("{prefix}{}", labels[v]), pebbles);
                    map.push(idx);
                }
            }
        }
        for (u, v) in g.edges() {
            self.add_edge(map[u], map[v]);
        }
        map
    }
}
