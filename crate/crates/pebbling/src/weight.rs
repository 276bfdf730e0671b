//! The standard weight function: pebbles at distance `i` from the root count
//! for `2^{-i}`. No pebbling move can increase the weight, so `weight >= k`
//! is a necessary condition for placing `k` pebbles on the root. Kept exact:
//! the public form is a big rational, the solver-facing form is an integer
//! scaled by `2^max_distance`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::distribution::PebbleDistribution;
use crate::error::CoreError;
use crate::graph::Graph;

/// Exact weight of `p` toward `r`: sum of `p(v) * 2^{-d(v,r)}`.
///
/// In strict mode, a pebbled vertex with no path to `r` is an error;
/// otherwise such pebbles contribute zero.
pub fn weight(
    g: &Graph,
    p: &PebbleDistribution,
    r: usize,
    strict: bool,
) -> Result<BigRational, CoreError> {
    p.validate_for(g)?;
    let dist = g.distances_from(r);
    let mut total = BigRational::zero();
    for v in 0..g.vertex_count() {
        let c = p.count(v);
        if c == 0 {
            continue;
        }
        match dist[v] {
            Some(d) => {
                let denom = BigInt::one() << d;
                total += BigRational::new(BigInt::from(c), denom);
            }
            None if strict => return Err(CoreError::Disconnected { vertex: v }),
            None => {}
        }
    }
    Ok(total)
}

/// Per-vertex scaled weights toward `r`: `w[v] = 2^(shift - d(v,r))`, with
/// `w[v] = 0` for vertices that cannot reach `r`. `shift` is the largest
/// finite distance, so all weights are integers and
/// `sum(p(v) * w[v]) >= k << shift` is exactly the weight inequality.
#[derive(Debug, Clone)]
pub struct ScaledWeights {
    pub shift: u32,
    pub per_vertex: Vec<u128>,
}

impl ScaledWeights {
    pub fn toward(g: &Graph, r: usize) -> ScaledWeights {
        let dist = g.distances_from(r);
        let shift = dist.iter().flatten().copied().max().unwrap_or(0) as u32;
        let per_vertex = dist
            .iter()
            .map(|d| match d {
                Some(d) => 1u128 << (shift - *d as u32),
                None => 0,
            })
            .collect();
        ScaledWeights { shift, per_vertex }
    }

    /// Scaled weight of a raw count vector.
    pub fn of_counts(&self, counts: &[u64]) -> u128 {
        counts
            .iter()
            .zip(&self.per_vertex)
            .map(|(&c, &w)| c as u128 * w)
            .sum()
    }

    /// The threshold `k << shift` that a distribution must meet to possibly
    /// place `k` pebbles on the root.
    pub fn threshold(&self, k: u64) -> u128 {
        (k as u128) << self.shift
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn weight_examples() {
        let g = Graph::path(3);
        let p = PebbleDistribution::new(vec![4, 0, 0]);
        let w = weight(&g, &p, 2, true).unwrap();
        assert_eq!(w, BigRational::from(BigInt::from(1)));

        let p = PebbleDistribution::new(vec![3, 0, 0]);
        let w = weight(&g, &p, 2, true).unwrap();
        assert_eq!(w, BigRational::new(BigInt::from(3), BigInt::from(4)));

        // Pebbles concentrated on the root weigh exactly the size.
        let p = PebbleDistribution::new(vec![0, 0, 5]);
        let w = weight(&g, &p, 2, true).unwrap();
        assert_eq!(w.to_integer().to_u64(), Some(5));
    }

    #[test]
    fn strict_mode_rejects_stranded_pebbles() {
        let g = Graph::new(3, &[(0, 1)]).unwrap();
        let p = PebbleDistribution::new(vec![0, 0, 2]);
        assert_eq!(
            weight(&g, &p, 0, true),
            Err(CoreError::Disconnected { vertex: 2 })
        );
        assert_eq!(weight(&g, &p, 0, false).unwrap(), BigRational::zero());
    }

    #[test]
    fn scaled_weights_agree_with_rational_weight() {
        let g = Graph::path(4);
        let sw = ScaledWeights::toward(&g, 3);
        let p = PebbleDistribution::new(vec![5, 1, 0, 2]);
        let scaled = sw.of_counts(p.counts());
        let exact = weight(&g, &p, 3, true).unwrap();
        let lhs = BigRational::new(BigInt::from(scaled), BigInt::one() << sw.shift);
        assert_eq!(lhs, exact);
    }
}
