//! Exhaustive search over assumed fault distributions, smallest first.
//!
//! Distributions of size `k` are visited as lexicographic combinations of
//! edge indices. Each size is scanned in parallel chunks and the first
//! qualifying distribution in that order is returned, so the answer does not
//! depend on the thread count.

use itertools::Itertools;
use rayon::prelude::*;

use super::SyncResult;
use crate::error::{NcsError, Result};
use crate::graph::{Edge, NcsGraph};
use crate::linsys::{
    residual_least_squares, solve_distribution, FaultDistribution, MeasurementSet,
};
use crate::rational::Rational;

const CHUNK: usize = 256;

/// Returns the first distribution (in search order) accepted by `accept`,
/// together with its 1-based position in that order.
fn first_accepted<R: Send>(
    edges: &[Edge],
    accept: impl Fn(&FaultDistribution) -> Result<Option<R>> + Sync,
) -> Result<Option<(R, FaultDistribution, usize)>> {
    let mut examined = 0;
    for k in 0..=edges.len() {
        let mut combos = (0..edges.len()).combinations(k);
        loop {
            let chunk: Vec<FaultDistribution> = combos
                .by_ref()
                .take(CHUNK)
                .map(|idx| FaultDistribution::of(idx.into_iter().map(|i| edges[i])))
                .collect();
            if chunk.is_empty() {
                break;
            }
            let results: Vec<Result<Option<R>>> = if chunk.len() > 8 {
                chunk.par_iter().map(&accept).collect()
            } else {
                chunk.iter().map(&accept).collect()
            };
            for (d, r) in chunk.into_iter().zip(results) {
                examined += 1;
                if let Some(found) = r? {
                    return Ok(Some((found, d, examined)));
                }
            }
        }
    }
    Ok(None)
}

/// Exact-mode search: the first distribution whose system has a unique solution.
///
/// Underdetermined systems are treated like inconsistent ones, so a round
/// that no distribution pins down yields [`NcsError::NoSolutionFound`].
pub fn ncs_exhaustive(g: &NcsGraph, m: &MeasurementSet<Rational>) -> Result<SyncResult<Rational>> {
    m.check(g)?;
    let found = first_accepted(g.edges(), |d| Ok(solve_distribution(g, m, d)?.unique()))?;
    let (solution, d, examined) = found.ok_or(NcsError::NoSolutionFound)?;
    Ok(SyncResult {
        solution,
        assumed_distribution: Some(d),
        iterations_examined: examined,
    })
}

/// Noisy-mode search: the first distribution whose least-squares fit keeps
/// every equation's residual within `eta`. Rank-deficient distributions are skipped.
pub fn ncs_exhaustive_noisy(
    g: &NcsGraph,
    m: &MeasurementSet<f64>,
    eta: f64,
) -> Result<SyncResult<f64>> {
    m.check(g)?;
    let found = first_accepted(g.edges(), |d| match residual_least_squares(g, m, d) {
        Ok(fit) if fit.within(eta) => Ok(Some(fit.candidate)),
        Ok(_) | Err(NcsError::Underdetermined) => Ok(None),
        Err(e) => Err(e),
    })?;
    let (solution, d, examined) = found.ok_or(NcsError::NoSolutionFound)?;
    Ok(SyncResult {
        solution,
        assumed_distribution: Some(d),
        iterations_examined: examined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linsys::ClockState;
    use crate::rational::int;

    fn round(
        g: &NcsGraph,
        truth: &ClockState<Rational>,
        faults: &[(Edge, i64)],
    ) -> MeasurementSet<Rational> {
        let mut values: std::collections::BTreeMap<Edge, Rational> =
            g.edges().iter().map(|e| (*e, truth.pairwise(*e))).collect();
        for (e, f) in faults {
            *values.get_mut(e).unwrap() += int(*f);
        }
        MeasurementSet::new(values)
    }

    #[test]
    fn fault_free_round_stops_at_k0() {
        let g = NcsGraph::cycle(5);
        let truth = ClockState::new(vec![int(1), int(2), int(-3), int(4)]);
        let r = ncs_exhaustive(&g, &round(&g, &truth, &[])).unwrap();
        assert_eq!(r.solution.offsets, truth.offsets());
        assert!(r.solution.fault_estimates.is_empty());
        assert_eq!(r.iterations_examined, 1);
    }

    #[test]
    fn single_fault_on_k4_is_corrected() {
        let g = NcsGraph::complete(4);
        let truth = ClockState::new(vec![int(3), int(-1), int(7)]);
        let e = Edge::of(0, 2);
        let r = ncs_exhaustive(&g, &round(&g, &truth, &[(e, 5)])).unwrap();
        assert_eq!(r.solution.offsets, truth.offsets());
        assert_eq!(r.assumed_distribution.unwrap(), FaultDistribution::of([e]));
        assert_eq!(r.solution.fault_estimates[&e], int(5));
        // (0,1) fails, then (0,2) succeeds
        assert_eq!(r.iterations_examined, 3);
    }

    #[test]
    fn tree_graph_cannot_be_pinned_down_beyond_k0() {
        let g = NcsGraph::path_graph(3);
        let truth = ClockState::new(vec![int(1), int(2)]);
        let r = ncs_exhaustive(&g, &round(&g, &truth, &[(Edge::of(0, 1), 4)])).unwrap();
        // the fault is invisible on a tree: k=0 is consistent
        assert_ne!(r.solution.offsets, truth.offsets());
    }

    #[test]
    fn noisy_variant_accepts_within_threshold() {
        let g = NcsGraph::complete(4);
        let m = MeasurementSet::new(
            g.edges()
                .iter()
                .map(|e| (*e, if *e == Edge::of(1, 3) { 6.0 } else { 0.0 }))
                .collect(),
        );
        let r = ncs_exhaustive_noisy(&g, &m, 2.0).unwrap();
        assert_eq!(
            r.assumed_distribution.unwrap(),
            FaultDistribution::of([Edge::of(1, 3)])
        );
        assert_eq!(r.solution.offsets, vec![0.0, 0.0, 0.0]);
    }
}
