//! Plain-reachability instance from a canonical formula: the formula graph
//! subdivided into one-use paths, with the odd stretch factor keeping the
//! result bipartite.

use crate::cnf::QuantifiedCnf;
use crate::error::ReductionError;

use super::gnpr::{build_gnpr, GnprInstance};
use super::subdivide::{subdivide_labeled, SubdividedInstance};
use super::PebblingInstance;

#[derive(Debug, Clone)]
pub struct GprInstance {
    pub instance: PebblingInstance,
    pub gnpr: GnprInstance,
    /// For each formula-graph edge, the one-use path that replaced it.
    pub path_of_edge: Vec<Vec<usize>>,
    pub alpha: u32,
}

/// The least odd integer strictly above `x`.
fn least_odd_above(x: f64) -> u32 {
    let mut a = x.floor() as i64 + 1;
    if (a as f64) <= x {
        a += 1;
    }
    if a % 2 == 0 {
        a += 1;
    }
    u32::try_from(a.max(1)).expect("stretch factor fits in u32")
}

/// The prescribed stretch: least odd number larger than
/// `max(lg 2|p|, 4 lg e)`.
pub fn conforming_gpr_alpha(pebbles: u64, edges: usize) -> u32 {
    let bound = f64::max(
        (2.0 * pebbles as f64).log2(),
        4.0 * (edges as f64).log2(),
    );
    least_odd_above(bound)
}

pub fn build_gpr(
    f: &QuantifiedCnf,
    alpha_override: Option<u32>,
) -> Result<GprInstance, ReductionError> {
    let gnpr = build_gnpr(f)?;
    let pebbles = gnpr.instance.distribution.size().expect("size");
    let edges = gnpr.instance.graph.edge_count();
    let conforming_alpha = conforming_gpr_alpha(pebbles, edges);
    let alpha = alpha_override.unwrap_or(conforming_alpha);
    let SubdividedInstance {
        mut instance,
        path_of_edge,
    } = subdivide_labeled(
        &gnpr.instance.graph,
        &gnpr.instance.distribution,
        alpha,
        &gnpr.instance.labels,
        gnpr.instance.target,
    );
    instance.conforming = alpha_override.is_none();
    Ok(GprInstance {
        instance,
        gnpr,
        path_of_edge,
        alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{Lit, QuantifiedCnf};

    #[test]
    fn conforming_alpha_for_the_small_example() {
        // 10 pebbles, 10 edges: max(lg 20, 4 lg 10) ~ 13.29, so 15.
        assert_eq!(conforming_gpr_alpha(10, 10), 15);
    }

    #[test]
    fn least_odd_above_handles_integers() {
        assert_eq!(least_odd_above(13.0), 15);
        assert_eq!(least_odd_above(12.5), 13);
        assert_eq!(least_odd_above(2.0), 3);
    }

    #[test]
    fn output_is_bipartite_with_odd_stretch() {
        let f = QuantifiedCnf::new(
            2,
            vec![
                vec![Lit::pos(0), Lit::pos(1)],
                vec![Lit::neg(0), Lit::neg(1)],
            ],
        );
        let gpr = build_gpr(&f, None).unwrap();
        assert_eq!(gpr.alpha, 15);
        assert!(gpr.instance.conforming);
        assert!(gpr.instance.graph.bipartition().is_some());
        assert!(gpr.instance.graph.max_degree() <= 3);
        assert!(gpr
            .instance
            .distribution
            .counts()
            .iter()
            .all(|&c| c <= 2));
        // Distances scale by 1 + alpha.
        let g0 = &gpr.gnpr.instance.graph;
        let r = gpr.gnpr.instance.target.unwrap();
        let far0 = g0
            .distances_from(r)
            .into_iter()
            .flatten()
            .max()
            .unwrap();
        let far1 = gpr
            .instance
            .graph
            .distances_from(r)
            .into_iter()
            .flatten()
            .max()
            .unwrap();
        assert_eq!(far1, far0 * (1 + gpr.alpha as usize));
    }
}
