//! Resilience bounds.
//!
//! A graph tolerates `K` arbitrary faulty sessions exactly when it is
//! `(2K + 1)`-edge-connected, so the tight bound is `⌊(λ - 1) / 2⌋`.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{NcsError, Result};
use crate::graph::{Edge, NcsGraph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResilienceReport {
    pub tight_bound: usize,
    pub edge_connectivity: usize,
    /// A minimum edge cut; faulting `tight_bound + 1` of its edges defeats correction.
    pub witness_cut: Vec<Edge>,
}

/// `⌊n/2⌋ - 1` for the complete graph on `n` nodes.
pub fn tight_bound_complete(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(NcsError::TooFewNodes {
            required: 2,
            actual: n,
        });
    }
    Ok(n / 2 - 1)
}

pub fn tight_bound(g: &NcsGraph) -> Result<ResilienceReport> {
    let (lambda, cut) = g.edge_connectivity_with_cut()?;
    if lambda == 0 {
        return Err(NcsError::Disconnected);
    }
    Ok(ResilienceReport {
        tight_bound: (lambda - 1) / 2,
        edge_connectivity: lambda,
        witness_cut: cut,
    })
}

/// Direct enumeration: the largest `K` such that no removal of `2K` edges
/// disconnects the graph. Exponential; meant for small graphs and cross-checks.
pub fn tight_bound_enumeration_oracle(g: &NcsGraph) -> Result<usize> {
    if g.node_count() < 2 {
        return Err(NcsError::TooFewNodes {
            required: 2,
            actual: g.node_count(),
        });
    }
    if !g.is_connected() {
        return Err(NcsError::Disconnected);
    }
    let m = g.edge_count();
    for k in 1.. {
        let size = 2 * k;
        if size > m {
            return Ok(k - 1);
        }
        if some_removal_disconnects(g, size) {
            return Ok(k - 1);
        }
    }
    unreachable!()
}

fn some_removal_disconnects(g: &NcsGraph, size: usize) -> bool {
    const CHUNK: usize = 4096;
    let m = g.edge_count();
    let mut combos = (0..m).combinations(size);
    loop {
        let chunk: Vec<Vec<usize>> = combos.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            return false;
        }
        let hit = chunk.par_iter().any(|idx| {
            let mut skip = vec![false; m];
            for &i in idx {
                skip[i] = true;
            }
            !g.connected_skipping(&skip)
        });
        if hit {
            return true;
        }
    }
}

/// True iff the graph is `(2k + 1)`-edge-connected.
pub fn k_resilient(g: &NcsGraph, k: usize) -> bool {
    g.edge_connectivity_at_least(2 * k + 1)
}

/// `⌈n(2k + 1) / 2⌉`: fewer edges cannot give every node degree `2k + 1`.
pub fn edge_count_lower_bound(n: usize, k: usize) -> usize {
    (n * (2 * k + 1)).div_ceil(2)
}

pub fn min_degree_check(g: &NcsGraph, k: usize) -> bool {
    g.min_degree() > 2 * k
}
