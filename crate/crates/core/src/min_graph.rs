//! Minimum graphs for a target resilience.
//!
//! Edges are removed from the complete graph one at a time. Removal sets are
//! grown in lexicographic order of edge index, and a set is only extended if
//! the graph left behind is still `k`-resilient; since resilience is monotone
//! in the edge set, every surviving removal set is reached this way. The
//! deepest level reached gives the minimum edge count.

use itertools::Itertools;
use rayon::prelude::*;

use crate::bounds::{edge_count_lower_bound, k_resilient};
use crate::error::{NcsError, Result};
use crate::graph::{Edge, NcsGraph};

pub const DEFAULT_LIMIT: usize = 16;
/// Largest node count accepted by the enumeration (edge masks fit in 64 bits).
pub const MAX_NODES: usize = 11;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinGraphResult {
    /// Up to `limit` minimum graphs, in lexicographic order of removed edges.
    pub graphs: Vec<NcsGraph>,
    pub edge_count: usize,
    pub lower_bound: usize,
    pub achieves_lower_bound: bool,
    /// Number of minimum graphs found (isomorphism classes when deduplicating).
    pub total_found: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinGraphOptions {
    pub limit: usize,
    pub dedup_isomorphic: bool,
}

impl Default for MinGraphOptions {
    fn default() -> Self {
        MinGraphOptions {
            limit: DEFAULT_LIMIT,
            dedup_isomorphic: false,
        }
    }
}

fn check_feasible(n: usize, k: usize) -> Result<()> {
    if n < 2 {
        return Err(NcsError::TooFewNodes {
            required: 2,
            actual: n,
        });
    }
    if 2 * k + 1 > n - 1 {
        return Err(NcsError::Infeasible { nodes: n, k });
    }
    Ok(())
}

struct Search<'a> {
    k: usize,
    n: usize,
    complete: &'a [Edge],
}

impl Search<'_> {
    fn graph_without(&self, removed: u64) -> NcsGraph {
        let edges = self
            .complete
            .iter()
            .enumerate()
            .filter(|(i, _)| removed & (1 << i) == 0)
            .map(|(_, e)| *e);
        NcsGraph::new(self.n, edges).expect("subgraph of complete graph")
    }

    /// Depth-first growth; returns the deepest level reached below `removed`
    /// and every removal set at that level, in lexicographic order.
    fn explore(
        &self,
        removed: u64,
        next: usize,
        depth: usize,
        degree: &mut [usize],
    ) -> (usize, Vec<u64>) {
        let mut best = (depth, vec![removed]);
        let floor = 2 * self.k + 1;
        for i in next..self.complete.len() {
            let (a, b) = self.complete[i].endpoints();
            // degree prune before the connectivity test
            if degree[a] <= floor || degree[b] <= floor {
                continue;
            }
            let grown = removed | (1 << i);
            if !k_resilient(&self.graph_without(grown), self.k) {
                continue;
            }
            degree[a] -= 1;
            degree[b] -= 1;
            let (d, sets) = self.explore(grown, i + 1, depth + 1, degree);
            degree[a] += 1;
            degree[b] += 1;
            merge(&mut best, d, sets);
        }
        best
    }
}

fn merge(best: &mut (usize, Vec<u64>), depth: usize, sets: Vec<u64>) {
    if depth > best.0 {
        *best = (depth, sets);
    } else if depth == best.0 {
        best.1.extend(sets);
    }
}

/// All minimum `k`-resilient graphs on `n` labeled nodes, up to `options.limit`.
pub fn minimum_ncs_graphs(n: usize, k: usize, options: MinGraphOptions) -> Result<MinGraphResult> {
    check_feasible(n, k)?;
    if n > MAX_NODES {
        return Err(NcsError::InvalidArgument(format!(
            "minimum graph search supports at most {MAX_NODES} nodes"
        )));
    }
    let kn = NcsGraph::complete(n);
    let complete = kn.edges().to_vec();
    let search = Search {
        k,
        n,
        complete: &complete,
    };

    // first removed edge in parallel, the rest depth-first
    let branches: Vec<(usize, Vec<u64>)> = (0..complete.len())
        .into_par_iter()
        .map(|i| {
            let mut degree = vec![n - 1; n];
            let (a, b) = complete[i].endpoints();
            let floor = 2 * k + 1;
            if degree[a] <= floor
                || degree[b] <= floor
                || !k_resilient(&search.graph_without(1 << i), k)
            {
                return (0, Vec::new());
            }
            degree[a] -= 1;
            degree[b] -= 1;
            search.explore(1 << i, i + 1, 1, &mut degree)
        })
        .collect();
    let mut best = (0usize, vec![0u64]);
    for (d, sets) in branches {
        if !sets.is_empty() {
            merge(&mut best, d, sets);
        }
    }
    let (removed, sets) = best;

    let mut masks = sets;
    if options.dedup_isomorphic {
        let mut seen = std::collections::HashSet::new();
        masks.retain(|&m| seen.insert(canonical_form(n, &complete, m)));
    }
    let total_found = masks.len();
    let graphs = masks
        .iter()
        .take(options.limit)
        .map(|&m| search.graph_without(m))
        .collect();
    let edge_count = complete.len() - removed;
    let lower_bound = edge_count_lower_bound(n, k);
    Ok(MinGraphResult {
        graphs,
        edge_count,
        lower_bound,
        achieves_lower_bound: edge_count == lower_bound,
        total_found,
    })
}

/// Smallest present-edge mask over all relabelings of the nodes.
fn canonical_form(n: usize, complete: &[Edge], removed: u64) -> u64 {
    let index = |a: usize, b: usize| {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        // position of (a, b) in the sorted complete edge list
        a * (2 * n - a - 1) / 2 + (b - a - 1)
    };
    let present: Vec<(usize, usize)> = complete
        .iter()
        .enumerate()
        .filter(|(i, _)| removed & (1 << i) == 0)
        .map(|(_, e)| e.endpoints())
        .collect();
    (0..n)
        .permutations(n)
        .map(|p| {
            present
                .iter()
                .fold(0u64, |acc, &(a, b)| acc | 1 << index(p[a], p[b]))
        })
        .min()
        .unwrap_or(0)
}

/// Builds a graph whose every node has degree `2k + 1` (one node `2k + 2`
/// when `n(2k + 1)` is odd) by lowest-degree pairing: the node furthest
/// below its target degree is joined to the nodes next furthest below
/// theirs, ties going to the lowest id. This is the Havel–Hakimi order,
/// which never dead-ends on a realizable degree sequence. The result meets
/// the degree condition but is not necessarily resilient.
pub fn greedy_min_degree_construction(n: usize, k: usize) -> Result<NcsGraph> {
    check_feasible(n, k)?;
    let target = 2 * k + 1;
    let mut demand = vec![target; n];
    if n * target % 2 == 1 {
        demand[0] += 1;
    }
    let mut edges = Vec::new();
    loop {
        let u = (0..n)
            .min_by_key(|&v| (std::cmp::Reverse(demand[v]), v))
            .expect("n >= 2");
        let need = std::mem::take(&mut demand[u]);
        if need == 0 {
            break;
        }
        let mut partners: Vec<usize> = (0..n).filter(|&v| v != u && demand[v] > 0).collect();
        partners.sort_by_key(|&v| (std::cmp::Reverse(demand[v]), v));
        assert!(partners.len() >= need, "degree sequence is realizable");
        for &v in &partners[..need] {
            demand[v] -= 1;
            edges.push(Edge::of(u, v));
        }
    }
    NcsGraph::new(n, edges)
}
