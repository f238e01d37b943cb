//! Reference graphs and seeded random graphs used by the test suites and
//! the `gen` command.

use std::collections::HashSet;

use rand::Rng;

use crate::graph::NcsGraph;
use crate::sim::stream_rng;

#[derive(Debug, Clone)]
pub struct NamedGraph {
    pub name: String,
    pub graph: NcsGraph,
    /// Tight resilience bound published alongside the graph, if any.
    pub published_bound: Option<usize>,
}

impl NamedGraph {
    fn new(name: impl Into<String>, graph: NcsGraph, published_bound: Option<usize>) -> Self {
        NamedGraph {
            name: name.into(),
            graph,
            published_bound,
        }
    }
}

fn graph(n: usize, pairs: &[(usize, usize)]) -> NcsGraph {
    NcsGraph::from_pairs(n, pairs).expect("static corpus graph")
}

/// Six incomplete graphs published with their tight bounds.
pub fn incomplete_reference_graphs() -> Vec<NamedGraph> {
    vec![
        NamedGraph::new(
            "k5-minus-edge",
            graph(
                5,
                &[
                    (0, 2),
                    (0, 3),
                    (0, 4),
                    (1, 2),
                    (1, 3),
                    (1, 4),
                    (2, 4),
                    (3, 4),
                    (2, 3),
                ],
            ),
            Some(1),
        ),
        NamedGraph::new(
            "k33-plus-chord",
            graph(
                6,
                &[
                    (0, 3),
                    (0, 4),
                    (0, 5),
                    (1, 3),
                    (1, 4),
                    (1, 5),
                    (2, 3),
                    (2, 4),
                    (2, 5),
                    (3, 4),
                ],
            ),
            Some(1),
        ),
        NamedGraph::new(
            "six-node-13-edge",
            graph(
                6,
                &[
                    (0, 2),
                    (0, 1),
                    (0, 4),
                    (0, 5),
                    (1, 2),
                    (1, 3),
                    (1, 5),
                    (2, 3),
                    (2, 5),
                    (2, 4),
                    (3, 4),
                    (3, 5),
                    (4, 5),
                ],
            ),
            Some(1),
        ),
        NamedGraph::new(
            "seven-node-14-edge",
            graph(
                7,
                &[
                    (0, 4),
                    (0, 5),
                    (0, 6),
                    (1, 4),
                    (1, 5),
                    (1, 6),
                    (2, 3),
                    (2, 5),
                    (2, 6),
                    (3, 4),
                    (3, 6),
                    (4, 5),
                    (4, 6),
                    (5, 6),
                ],
            ),
            Some(1),
        ),
        NamedGraph::new(
            "seven-node-19-edge",
            graph(
                7,
                &[
                    (0, 2),
                    (0, 3),
                    (0, 4),
                    (0, 5),
                    (0, 6),
                    (1, 2),
                    (1, 3),
                    (1, 4),
                    (1, 5),
                    (1, 6),
                    (2, 4),
                    (2, 5),
                    (2, 6),
                    (3, 4),
                    (3, 5),
                    (3, 6),
                    (4, 6),
                    (5, 6),
                    (4, 5),
                ],
            ),
            Some(2),
        ),
        NamedGraph::new(
            "eight-node-24-edge",
            graph(
                8,
                &[
                    (0, 1),
                    (0, 2),
                    (0, 3),
                    (0, 4),
                    (0, 5),
                    (0, 6),
                    (0, 7),
                    (1, 4),
                    (1, 5),
                    (1, 6),
                    (1, 7),
                    (2, 3),
                    (2, 4),
                    (2, 7),
                    (3, 4),
                    (3, 5),
                    (3, 6),
                    (3, 7),
                    (4, 5),
                    (4, 6),
                    (4, 7),
                    (5, 6),
                    (5, 7),
                    (6, 7),
                ],
            ),
            Some(2),
        ),
    ]
}

/// Published minimum graphs as `(name, k, graph)`.
pub fn minimum_reference_graphs() -> Vec<(NamedGraph, usize)> {
    vec![
        (
            NamedGraph::new(
                "min-n5-k1",
                graph(
                    5,
                    &[
                        (0, 2),
                        (0, 3),
                        (0, 4),
                        (1, 2),
                        (1, 3),
                        (1, 4),
                        (2, 4),
                        (3, 4),
                    ],
                ),
                Some(1),
            ),
            1,
        ),
        (
            NamedGraph::new(
                "min-n6-k1",
                graph(
                    6,
                    &[
                        (0, 3),
                        (0, 4),
                        (0, 5),
                        (1, 3),
                        (1, 4),
                        (1, 5),
                        (2, 3),
                        (2, 4),
                        (2, 5),
                    ],
                ),
                Some(1),
            ),
            1,
        ),
        (
            NamedGraph::new("min-n6-k2", NcsGraph::complete(6), Some(2)),
            2,
        ),
        (
            NamedGraph::new(
                "min-n7-k1",
                graph(
                    7,
                    &[
                        (0, 4),
                        (0, 5),
                        (0, 6),
                        (1, 4),
                        (1, 5),
                        (1, 6),
                        (2, 3),
                        (2, 5),
                        (2, 6),
                        (3, 4),
                        (3, 6),
                    ],
                ),
                Some(1),
            ),
            1,
        ),
        (
            NamedGraph::new(
                "min-n7-k2",
                graph(
                    7,
                    &[
                        (0, 2),
                        (0, 3),
                        (0, 4),
                        (0, 5),
                        (0, 6),
                        (1, 2),
                        (1, 3),
                        (1, 4),
                        (1, 5),
                        (1, 6),
                        (2, 4),
                        (2, 5),
                        (2, 6),
                        (3, 4),
                        (3, 5),
                        (3, 6),
                        (4, 6),
                        (5, 6),
                    ],
                ),
                Some(2),
            ),
            2,
        ),
        (
            NamedGraph::new("min-n8-k3", NcsGraph::complete(8), Some(3)),
            3,
        ),
    ]
}

/// Wheel: hub 0 joined to a cycle on `1..n`.
pub fn wheel(n: usize) -> NcsGraph {
    assert!(n >= 4);
    let rim = n - 1;
    let mut pairs: Vec<(usize, usize)> = (1..n).map(|v| (0, v)).collect();
    pairs.extend((0..rim).map(|i| (1 + i, 1 + (i + 1) % rim)));
    graph(n, &pairs)
}

pub fn complete_bipartite(p: usize, q: usize) -> NcsGraph {
    let pairs: Vec<(usize, usize)> = (0..p)
        .flat_map(|a| (p..p + q).map(move |b| (a, b)))
        .collect();
    graph(p + q, &pairs)
}

/// Triangular prism (two triangles joined by a matching).
pub fn prism() -> NcsGraph {
    graph(
        6,
        &[
            (0, 1),
            (1, 2),
            (0, 2),
            (3, 4),
            (4, 5),
            (3, 5),
            (0, 3),
            (1, 4),
            (2, 5),
        ],
    )
}

/// Connected graph on `n` nodes: a random spanning tree plus each remaining
/// pair with probability `p`. Deterministic in `(n, p, seed)`.
pub fn random_connected_graph(n: usize, p: f64, seed: u64) -> NcsGraph {
    let mut rng = stream_rng(seed, n as u64);
    let mut pairs = Vec::new();
    for v in 1..n {
        pairs.push((rng.random_range(0..v), v));
    }
    let tree: HashSet<(usize, usize)> = pairs.iter().copied().collect();
    for a in 0..n {
        for b in a + 1..n {
            if !tree.contains(&(a, b)) && rng.random_bool(p) {
                pairs.push((a, b));
            }
        }
    }
    graph(n, &pairs)
}

/// Structured families plus the published graphs, all with at most `max_nodes` nodes.
pub fn standard_corpus(max_nodes: usize) -> Vec<NamedGraph> {
    let mut out = Vec::new();
    for n in 2..=max_nodes {
        out.push(NamedGraph::new(
            format!("complete-{n}"),
            NcsGraph::complete(n),
            Some(n / 2 - 1),
        ));
    }
    for n in 3..=max_nodes {
        out.push(NamedGraph::new(
            format!("cycle-{n}"),
            NcsGraph::cycle(n),
            None,
        ));
        out.push(NamedGraph::new(
            format!("star-{n}"),
            NcsGraph::star(n),
            None,
        ));
        out.push(NamedGraph::new(
            format!("path-{n}"),
            NcsGraph::path_graph(n),
            None,
        ));
    }
    for n in 4..=max_nodes {
        out.push(NamedGraph::new(format!("wheel-{n}"), wheel(n), None));
    }
    if max_nodes >= 6 {
        out.push(NamedGraph::new("k33", complete_bipartite(3, 3), None));
        out.push(NamedGraph::new("k24", complete_bipartite(2, 4), None));
        out.push(NamedGraph::new("prism", prism(), None));
    }
    if max_nodes >= 5 {
        out.push(NamedGraph::new("k23", complete_bipartite(2, 3), None));
    }
    out.extend(
        incomplete_reference_graphs()
            .into_iter()
            .filter(|g| g.graph.node_count() <= max_nodes),
    );
    out.extend(
        minimum_reference_graphs()
            .into_iter()
            .map(|(g, _)| g)
            .filter(|g| g.graph.node_count() <= max_nodes),
    );
    out
}

/// `count` random connected graphs with node counts cycling through `min_nodes..=max_nodes`.
pub fn random_corpus(
    count: usize,
    min_nodes: usize,
    max_nodes: usize,
    seed: u64,
) -> Vec<NamedGraph> {
    let span = max_nodes - min_nodes + 1;
    (0..count)
        .map(|i| {
            let n = min_nodes + i % span;
            let p = [0.25, 0.45, 0.65, 0.85][i % 4];
            let g = random_connected_graph(n, p, seed.wrapping_add(i as u64));
            NamedGraph::new(format!("random-{i}-n{n}"), g, None)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_graphs_have_listed_sizes() {
        let sizes: Vec<(usize, usize)> = incomplete_reference_graphs()
            .iter()
            .map(|g| (g.graph.node_count(), g.graph.edge_count()))
            .collect();
        assert_eq!(
            sizes,
            vec![(5, 9), (6, 10), (6, 13), (7, 14), (7, 19), (8, 24)]
        );
        let mins: Vec<usize> = minimum_reference_graphs()
            .iter()
            .map(|(g, _)| g.graph.edge_count())
            .collect();
        assert_eq!(mins, vec![8, 9, 15, 11, 18, 28]);
    }

    #[test]
    fn random_graphs_are_connected_and_reproducible() {
        for seed in 0..20 {
            let g = random_connected_graph(7, 0.3, seed);
            assert!(g.is_connected());
            assert_eq!(g, random_connected_graph(7, 0.3, seed));
        }
    }

    #[test]
    fn families() {
        assert_eq!(wheel(6).edge_count(), 10);
        assert_eq!(complete_bipartite(3, 3).edge_count(), 9);
        assert!(standard_corpus(6).iter().all(|g| g.graph.is_connected()));
        assert!(standard_corpus(6).len() >= 30);
    }
}
