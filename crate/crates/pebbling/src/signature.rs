//! Signatures: directed multigraphs of pebbling-move multiplicities.

use std::collections::BTreeMap;
use std::fmt;

use crate::distribution::PebbleDistribution;
use crate::error::CoreError;
use crate::graph::Graph;

/// The signature of a sequence of pebbling moves: arc `(u,v)` carries the
/// number of times the sequence pebbles from `u` to `v`. Absent arcs have
/// multiplicity zero; stored arcs are always positive. Loops are rejected
/// (a pebbling move never targets its own source).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    arcs: BTreeMap<(usize, usize), u64>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn from_arcs(
        arcs: impl IntoIterator<Item = ((usize, usize), u64)>,
    ) -> Result<Signature, CoreError> {
        let mut sig = Signature::new();
        for ((u, v), m) in arcs {
            sig.add_arc(u, v, m)?;
        }
        Ok(sig)
    }

    pub fn add_arc(&mut self, u: usize, v: usize, multiplicity: u64) -> Result<(), CoreError> {
        if u == v {
            return Err(CoreError::LoopEdge { vertex: u });
        }
        if multiplicity == 0 {
            return Ok(());
        }
        let slot = self.arcs.entry((u, v)).or_insert(0);
        *slot = slot.checked_add(multiplicity).ok_or(CoreError::Overflow)?;
        Ok(())
    }

    /// Removes up to `multiplicity` copies of `(u,v)`, dropping the arc at zero.
    pub fn remove_arc(&mut self, u: usize, v: usize, multiplicity: u64) {
        if let Some(slot) = self.arcs.get_mut(&(u, v)) {
            *slot = slot.saturating_sub(multiplicity);
            if *slot == 0 {
                self.arcs.remove(&(u, v));
            }
        }
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u64 {
        self.arcs.get(&(u, v)).copied().unwrap_or(0)
    }

    /// Distinct arcs in sorted order.
    pub fn arcs(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.arcs.iter().map(|(&a, &m)| (a, m))
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Total multiplicity over all arcs.
    pub fn total_multiplicity(&self) -> u64 {
        self.arcs.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Largest vertex index mentioned, plus one.
    pub fn min_vertex_count(&self) -> usize {
        self.arcs
            .keys()
            .map(|&(u, v)| u.max(v) + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn indegree(&self, v: usize) -> u64 {
        self.arcs
            .iter()
            .filter(|(&(_, t), _)| t == v)
            .map(|(_, &m)| m)
            .sum()
    }

    pub fn outdegree(&self, v: usize) -> u64 {
        self.arcs
            .range((v, 0)..=(v, usize::MAX))
            .map(|(_, &m)| m)
            .sum()
    }

    /// `p(v) + indegree(v) - 2*outdegree(v)`: the pebble count at `v` after
    /// any sequence with this signature. May be negative.
    pub fn balance(&self, p: &PebbleDistribution, v: usize) -> i128 {
        let pv = if v < p.len() { p.count(v) } else { 0 };
        pv as i128 + self.indegree(v) as i128 - 2 * self.outdegree(v) as i128
    }

    /// Every arc must run along an edge of `g`.
    pub fn validate_for(&self, g: &Graph) -> Result<(), CoreError> {
        for (&(u, v), _) in &self.arcs {
            if u >= g.vertex_count() || v >= g.vertex_count() {
                return Err(CoreError::VertexOutOfRange {
                    vertex: u.max(v),
                    vertex_count: g.vertex_count(),
                });
            }
            if !g.has_edge(u, v) {
                return Err(CoreError::NotAnEdge { u, v });
            }
        }
        Ok(())
    }

    /// Arc-wise order: `self` is a sub-multigraph of `other`.
    pub fn subgraph_of(&self, other: &Signature) -> bool {
        self.arcs
            .iter()
            .all(|(&(u, v), &m)| m <= other.multiplicity(u, v))
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (&(u, v), m)) in self.arcs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({u},{v}):{m}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees_and_balance() {
        let d = Signature::from_arcs([((0, 1), 2), ((1, 2), 1)]).unwrap();
        assert_eq!(d.outdegree(0), 2);
        assert_eq!(d.indegree(1), 2);
        assert_eq!(d.outdegree(1), 1);
        let p = PebbleDistribution::new(vec![4, 0, 0]);
        assert_eq!(d.balance(&p, 0), 0);
        assert_eq!(d.balance(&p, 1), 0);
        assert_eq!(d.balance(&p, 2), 1);
    }

    #[test]
    fn negative_balance_is_representable() {
        let d = Signature::from_arcs([((0, 1), 1)]).unwrap();
        let p = PebbleDistribution::new(vec![0, 0]);
        assert_eq!(d.balance(&p, 0), -2);
    }

    #[test]
    fn rejects_loops() {
        let mut d = Signature::new();
        assert!(d.add_arc(3, 3, 1).is_err());
    }
}
