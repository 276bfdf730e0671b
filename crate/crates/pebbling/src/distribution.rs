//! Pebble distributions: one non-negative count per vertex.

use std::fmt;

use crate::error::CoreError;
use crate::graph::Graph;

/// A distribution of pebbles to the vertices of a companion graph. All
/// arithmetic is overflow-checked; counts never wrap.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PebbleDistribution {
    counts: Vec<u64>,
}

impl PebbleDistribution {
    pub fn new(counts: Vec<u64>) -> PebbleDistribution {
        PebbleDistribution { counts }
    }

    pub fn zeros(n: usize) -> PebbleDistribution {
        PebbleDistribution {
            counts: vec![0; n],
        }
    }

    /// The unit distribution: one pebble on every vertex.
    pub fn unit(n: usize) -> PebbleDistribution {
        PebbleDistribution {
            counts: vec![1; n],
        }
    }

    /// Checks the length against a companion graph.
    pub fn validate_for(&self, g: &Graph) -> Result<(), CoreError> {
        if self.counts.len() != g.vertex_count() {
            return Err(CoreError::LengthMismatch {
                len: self.counts.len(),
                vertex_count: g.vertex_count(),
            });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn count(&self, v: usize) -> u64 {
        self.counts[v]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Total number of pebbles, overflow-checked.
    pub fn size(&self) -> Result<u64, CoreError> {
        self.counts
            .iter()
            .try_fold(0u64, |acc, &c| acc.checked_add(c).ok_or(CoreError::Overflow))
    }

    pub fn set(&mut self, v: usize, c: u64) {
        self.counts[v] = c;
    }

    pub fn add(&mut self, v: usize, c: u64) -> Result<(), CoreError> {
        self.counts[v] = self.counts[v].checked_add(c).ok_or(CoreError::Overflow)?;
        Ok(())
    }

    pub fn sub(&mut self, v: usize, c: u64) -> Result<(), CoreError> {
        self.counts[v] = self.counts[v].checked_sub(c).ok_or(CoreError::Overflow)?;
        Ok(())
    }

    /// Pointwise order: `self >= other` on every vertex.
    pub fn dominates(&self, other: &PebbleDistribution) -> bool {
        self.counts.len() == other.counts.len()
            && self
                .counts
                .iter()
                .zip(&other.counts)
                .all(|(&a, &b)| a >= b)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(v, _)| v)
    }
}

impl fmt::Display for PebbleDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u64>> for PebbleDistribution {
    fn from(counts: Vec<u64>) -> Self {
        PebbleDistribution::new(counts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_and_dominance() {
        let p = PebbleDistribution::new(vec![3, 0, 1]);
        assert_eq!(p.size().unwrap(), 4);
        assert!(p.dominates(&PebbleDistribution::new(vec![2, 0, 1])));
        assert!(!p.dominates(&PebbleDistribution::new(vec![0, 1, 0])));
    }

    #[test]
    fn size_overflow_is_an_error() {
        let p = PebbleDistribution::new(vec![u64::MAX, 1]);
        assert_eq!(p.size(), Err(CoreError::Overflow));
    }
}
