//! Voting over edge-disjoint paths from the reference node.
//!
//! Chaining measurements along a path that carries no faulty session yields
//! the true offset of its endpoint, so with at most `K` faults and `2K + 1`
//! disjoint paths the correct value holds a strict majority.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{detect_faults, detect_faults_above, SyncResult};
use crate::error::{NcsError, Result};
use crate::graph::{NcsGraph, NodeId, Path};
use crate::linsys::{ClockState, MeasurementSet, NcsSolution, Scalar};
use crate::rational::Rational;

/// Offset of the path's sink obtained by substituting measurements hop by hop.
fn chain<T: Scalar>(m: &MeasurementSet<T>, path: &Path) -> T {
    path.hops().fold(T::zero(), |acc, (u, v)| {
        acc - m.directed(u, v).expect("path edge has a measurement")
    })
}

/// Candidates for every non-reference node, in node order.
fn candidates<T: Scalar + Send + Sync>(
    g: &NcsGraph,
    m: &MeasurementSet<T>,
) -> Result<Vec<Vec<(T, usize)>>> {
    m.check(g)?;
    if g.node_count() < 2 {
        return Ok(Vec::new());
    }
    if !g.is_connected() {
        return Err(NcsError::Disconnected);
    }
    (1..g.node_count())
        .into_par_iter()
        .map(|i| {
            let dp = g.max_edge_disjoint_paths(NodeId::REFERENCE, NodeId(i))?;
            Ok(dp.paths.iter().map(|p| (chain(m, p), p.len())).collect())
        })
        .collect::<Vec<Result<_>>>()
        .into_iter()
        .collect()
}

/// Exact-mode voting; a tie for the most frequent value is an error.
pub fn ncs_fast(g: &NcsGraph, m: &MeasurementSet<Rational>) -> Result<SyncResult<Rational>> {
    let per_node = candidates(g, m)?;
    let mut offsets = Vec::with_capacity(per_node.len());
    let mut examined = 0;
    for (i, cands) in per_node.into_iter().enumerate() {
        examined += cands.len();
        let mut freq: BTreeMap<Rational, usize> = BTreeMap::new();
        for (v, _) in cands {
            *freq.entry(v).or_default() += 1;
        }
        let top = freq
            .values()
            .copied()
            .max()
            .expect("connected node has a path");
        let mut winners = freq.into_iter().filter(|(_, c)| *c == top);
        let (value, _) = winners.next().expect("nonempty");
        let tied = 1 + winners.count();
        if tied > 1 {
            return Err(NcsError::Ambiguous {
                node: NodeId(i + 1),
                tied,
                frequency: top,
            });
        }
        offsets.push(value);
    }
    let fault_estimates = detect_faults(g, m, &ClockState::new(offsets.clone()))?;
    Ok(SyncResult {
        solution: NcsSolution {
            offsets,
            fault_estimates,
        },
        assumed_distribution: None,
        iterations_examined: examined,
    })
}

/// Noisy-mode voting.
///
/// Candidates are grouped by single linkage with gap `2 * eta`; the largest
/// group wins and its median becomes the estimate. Equal-sized groups are
/// separated by the shortest path they contain (then the lowest path index).
/// Edges whose defect exceeds `eta` are reported as faults.
pub fn ncs_fast_noisy(g: &NcsGraph, m: &MeasurementSet<f64>, eta: f64) -> Result<SyncResult<f64>> {
    let per_node = candidates(g, m)?;
    let mut examined = 0;
    let offsets: Vec<f64> = per_node
        .into_iter()
        .map(|cands| {
            examined += cands.len();
            vote_clustered(&cands, 2.0 * eta)
        })
        .collect();
    let fault_estimates = detect_faults_above(g, m, &ClockState::new(offsets.clone()), eta)?;
    Ok(SyncResult {
        solution: NcsSolution {
            offsets,
            fault_estimates,
        },
        assumed_distribution: None,
        iterations_examined: examined,
    })
}

/// `cands` holds `(value, path length)` in path order.
fn vote_clustered(cands: &[(f64, usize)], gap: f64) -> f64 {
    let mut order: Vec<usize> = (0..cands.len()).collect();
    order.sort_by(|&x, &y| cands[x].0.total_cmp(&cands[y].0).then(x.cmp(&y)));

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match clusters.last_mut() {
            Some(c) if cands[i].0 - cands[*c.last().expect("nonempty")].0 <= gap => c.push(i),
            _ => clusters.push(vec![i]),
        }
    }
    let key = |c: &Vec<usize>| {
        let best_path = c.iter().map(|&i| (cands[i].1, i)).min().expect("nonempty");
        (std::cmp::Reverse(c.len()), best_path)
    };
    let winner = clusters
        .iter()
        .min_by_key(|c| key(c))
        .expect("at least one candidate");
    let vals: Vec<f64> = winner.iter().map(|&i| cands[i].0).collect();
    let mid = vals.len() / 2;
    if vals.len() % 2 == 1 {
        vals[mid]
    } else {
        (vals[mid - 1] + vals[mid]) / 2.0
    }
}
