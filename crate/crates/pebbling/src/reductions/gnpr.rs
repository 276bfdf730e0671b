//! Formula-to-graph construction for nonrepetitive reachability.
//!
//! Variable gadget: a path v1-v2-v3, two pebbles on each endpoint, none in
//! the middle; v1/v3 serve the positive occurrences and v2 the negative
//! one. Clause gadgets are ORs (a vertex with one pebble, two inputs, one
//! output), chained for 3-literal clauses; the clause outputs feed a
//! balanced tree of AND vertices (no pebbles) whose output reaches the
//! target r. Satisfiable formulas are exactly those whose instance lets a
//! nonrepetitive sequence deliver a pebble to r.

use std::collections::BTreeMap;

use crate::cnf::QuantifiedCnf;
use crate::error::ReductionError;

use super::{InstanceBuilder, InstanceParams, PebblingInstance};

#[derive(Debug, Clone)]
pub struct GnprInstance {
    pub instance: PebblingInstance,
    /// Variable index -> its gadget vertices [v1, v2, v3].
    pub var_vertices: BTreeMap<usize, [usize; 3]>,
}

pub fn build_gnpr(f: &QuantifiedCnf) -> Result<GnprInstance, ReductionError> {
    if let Some(violation) = f.canonical_violation() {
        return Err(ReductionError::NotCanonical(violation));
    }

    let mut b = InstanceBuilder::new();
    let mut var_vertices: BTreeMap<usize, [usize; 3]> = BTreeMap::new();
    for &x in &f.appearing_vars() {
        let v1 = b.add_vertex(format!("X{}.v1", x + 1), 2);
        let v2 = b.add_vertex(format!("X{}.v2", x + 1), 0);
        let v3 = b.add_vertex(format!("X{}.v3", x + 1), 2);
        b.add_edge(v1, v2);
        b.add_edge(v2, v3);
        var_vertices.insert(x, [v1, v2, v3]);
    }

    // Positive occurrences consume v1 first, then v3; the single negative
    // occurrence uses v2. Canonical form guarantees each slot is used at
    // most once, so every gadget vertex carries at most one output edge.
    let mut positive_used: BTreeMap<usize, usize> = BTreeMap::new();
    let mut literal_source = |var: usize, positive: bool| -> usize {
        let [v1, v2, v3] = var_vertices[&var];
        if positive {
            let used = positive_used.entry(var).or_insert(0);
            *used += 1;
            match *used {
                1 => v1,
                2 => v3,
                _ => unreachable!("canonical form caps positive occurrences at two"),
            }
        } else {
            v2
        }
    };

    // One OR vertex per pair of inputs, chained for 3-literal clauses.
    let mut clause_outputs = Vec::new();
    for (j, clause) in f.clauses.iter().enumerate() {
        let inputs: Vec<usize> = clause
            .iter()
            .map(|lit| literal_source(lit.var, lit.positive))
            .collect();
        let or0 = b.add_vertex(format!("C{}.or1", j + 1), 1);
        b.add_edge(inputs[0], or0);
        b.add_edge(inputs[1], or0);
        let out = if inputs.len() == 3 {
            let or1 = b.add_vertex(format!("C{}.or2", j + 1), 1);
            b.add_edge(or0, or1);
            b.add_edge(inputs[2], or1);
            or1
        } else {
            or0
        };
        clause_outputs.push(out);
    }

    // Balanced AND tree over the clause outputs.
    let mut and_count = 0usize;
    let root = and_tree(&mut b, &clause_outputs, &mut and_count);
    let r = b.add_vertex("r".to_string(), 0);
    b.add_edge(root, r);

    let (graph, distribution, labels) = b.build();
    debug_assert!(graph.max_degree() <= 3);
    debug_assert!(distribution.counts().iter().all(|&c| c <= 2));
    let instance = PebblingInstance {
        graph,
        distribution,
        target: Some(r),
        budget_k: None,
        labels,
        conforming: true,
        params: InstanceParams::default(),
    };
    instance.assert_labels_consistent();
    Ok(GnprInstance {
        instance,
        var_vertices,
    })
}

/// Combines inputs with 2-ary AND vertices, splitting each level in half.
/// Formulas have at least two clauses, so at least one AND vertex exists.
fn and_tree(b: &mut InstanceBuilder, inputs: &[usize], count: &mut usize) -> usize {
    if inputs.len() == 1 {
        return inputs[0];
    }
    let mid = inputs.len().div_ceil(2);
    let left = and_tree(b, &inputs[..mid], count);
    let right = and_tree(b, &inputs[mid..], count);
    *count += 1;
    let v = b.add_vertex(format!("A.and{count}"), 0);
    b.add_edge(left, v);
    b.add_edge(right, v);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{example_formula, Lit};

    #[test]
    fn two_variable_two_clause_instance_shape() {
        // (w | x) & (!w | !x): 2 gadgets, 2 OR vertices, 1 AND vertex, r.
        let f = QuantifiedCnf::new(
            2,
            vec![
                vec![Lit::pos(0), Lit::pos(1)],
                vec![Lit::neg(0), Lit::neg(1)],
            ],
        );
        let built = build_gnpr(&f).unwrap();
        let inst = &built.instance;
        assert_eq!(inst.graph.vertex_count(), 10);
        assert_eq!(inst.distribution.size().unwrap(), 10);
        assert!(inst.graph.max_degree() <= 3);
    }

    #[test]
    fn worked_example_counts() {
        let built = build_gnpr(&example_formula()).unwrap();
        let inst = &built.instance;
        // 4 gadgets (12), OR vertices 1+1+2+2 (6), AND tree (3), r (1).
        assert_eq!(inst.graph.vertex_count(), 22);
        assert_eq!(inst.graph.edge_count(), 27);
        assert_eq!(inst.distribution.size().unwrap(), 22);
        assert!(inst.graph.max_degree() <= 3);
        assert!(inst.graph.is_connected());
    }

    #[test]
    fn rejects_non_canonical_formulas() {
        let f = QuantifiedCnf::new(2, vec![vec![Lit::pos(0), Lit::pos(1)]]);
        assert!(matches!(
            build_gnpr(&f),
            Err(ReductionError::NotCanonical(_))
        ));
    }
}
