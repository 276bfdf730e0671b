//! Pebbling moves and move sequences.

use crate::distribution::PebbleDistribution;
use crate::error::CoreError;
use crate::graph::Graph;
use crate::signature::Signature;

/// An ordered list of pebbling moves `(u, v)`: remove two pebbles from `u`,
/// add one to its neighbor `v`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MoveSequence {
    moves: Vec<(usize, usize)>,
}

impl MoveSequence {
    pub fn new(moves: Vec<(usize, usize)>) -> MoveSequence {
        MoveSequence { moves }
    }

    pub fn empty() -> MoveSequence {
        MoveSequence::default()
    }

    pub fn moves(&self) -> &[(usize, usize)] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn push(&mut self, u: usize, v: usize) {
        self.moves.push((u, v));
    }
}

impl From<Vec<(usize, usize)>> for MoveSequence {
    fn from(moves: Vec<(usize, usize)>) -> Self {
        MoveSequence::new(moves)
    }
}

/// Applies a single pebbling move, returning the new distribution. The input
/// is left untouched.
pub fn apply_move(
    g: &Graph,
    p: &PebbleDistribution,
    u: usize,
    v: usize,
) -> Result<PebbleDistribution, CoreError> {
    p.validate_for(g)?;
    if !g.has_edge(u, v) {
        return Err(CoreError::NotAnEdge { u, v });
    }
    if p.count(u) < 2 {
        return Err(CoreError::InsufficientPebbles {
            vertex: u,
            have: p.count(u),
        });
    }
    let mut q = p.clone();
    q.sub(u, 2)?;
    q.add(v, 1)?;
    Ok(q)
}

/// Replays a move sequence from `p`. On the first illegal move, reports its
/// index.
pub fn apply_sequence(
    g: &Graph,
    p: &PebbleDistribution,
    s: &MoveSequence,
) -> Result<PebbleDistribution, CoreError> {
    p.validate_for(g)?;
    let mut cur = p.clone();
    for (i, &(u, v)) in s.moves().iter().enumerate() {
        cur = apply_move(g, &cur, u, v).map_err(|_| CoreError::IllegalAt { index: i })?;
    }
    Ok(cur)
}

/// Counts each directed move into a signature.
pub fn signature_of(s: &MoveSequence) -> Signature {
    let mut sig = Signature::new();
    for &(u, v) in s.moves() {
        sig.add_arc(u, v, 1).expect("moves never form loops");
    }
    sig
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2() -> Graph {
        Graph::complete(2)
    }

    #[test]
    fn apply_move_examples() {
        let g = k2();
        let p = PebbleDistribution::new(vec![2, 0]);
        let q = apply_move(&g, &p, 0, 1).unwrap();
        assert_eq!(q.counts(), &[0, 1]);
        // Value semantics: the input distribution is unchanged.
        assert_eq!(p.counts(), &[2, 0]);

        let p = PebbleDistribution::new(vec![3, 1]);
        assert_eq!(apply_move(&g, &p, 0, 1).unwrap().counts(), &[1, 2]);

        let p = PebbleDistribution::new(vec![1, 0]);
        assert_eq!(
            apply_move(&g, &p, 0, 1),
            Err(CoreError::InsufficientPebbles { vertex: 0, have: 1 })
        );
    }

    #[test]
    fn apply_move_requires_an_edge() {
        let g = Graph::path(3);
        let p = PebbleDistribution::new(vec![2, 0, 0]);
        assert_eq!(apply_move(&g, &p, 0, 2), Err(CoreError::NotAnEdge { u: 0, v: 2 }));
    }

    #[test]
    fn apply_sequence_examples() {
        let g = Graph::path(3);
        let p = PebbleDistribution::new(vec![4, 0, 0]);
        let s = MoveSequence::new(vec![(0, 1), (0, 1), (1, 2)]);
        let q = apply_sequence(&g, &p, &s).unwrap();
        assert_eq!(q.counts(), &[0, 0, 1]);
        // Each move burns exactly one pebble.
        assert_eq!(q.size().unwrap(), p.size().unwrap() - s.len() as u64);

        assert_eq!(
            apply_sequence(&g, &p, &MoveSequence::empty()).unwrap(),
            p
        );

        let p = PebbleDistribution::new(vec![2, 0, 0]);
        let s = MoveSequence::new(vec![(0, 1), (1, 2)]);
        assert_eq!(
            apply_sequence(&g, &p, &s),
            Err(CoreError::IllegalAt { index: 1 })
        );
    }

    #[test]
    fn signature_of_counts_moves() {
        let s = MoveSequence::new(vec![(0, 1), (0, 1), (1, 2)]);
        let sig = signature_of(&s);
        assert_eq!(sig.multiplicity(0, 1), 2);
        assert_eq!(sig.multiplicity(1, 2), 1);

        assert!(signature_of(&MoveSequence::empty()).is_empty());

        let s = MoveSequence::new(vec![(0, 1), (1, 0)]);
        let sig = signature_of(&s);
        assert_eq!(sig.multiplicity(0, 1), 1);
        assert_eq!(sig.multiplicity(1, 0), 1);
    }
}
