//! Synchronization graphs and the connectivity machinery the resilience
//! results are built on.
//!
//! Node 0 is always the reference node. Edges are undirected and stored in
//! canonical orientation (`a < b`); the graph keeps them sorted so every
//! iteration order is reproducible.

mod flow;
pub mod format;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{NcsError, Result};

pub use flow::DisjointPaths;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl NodeId {
    pub const REFERENCE: NodeId = NodeId(0);

    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for NodeId {
    fn from(v: usize) -> Self {
        NodeId(v)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An undirected synchronization session between two distinct nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    a: NodeId,
    b: NodeId,
}

impl Edge {
    /// Builds the canonical edge for the unordered pair `{u, v}`.
    pub fn new(u: impl Into<NodeId>, v: impl Into<NodeId>) -> Result<Self> {
        let (u, v) = (u.into(), v.into());
        match u.cmp(&v) {
            std::cmp::Ordering::Less => Ok(Edge { a: u, b: v }),
            std::cmp::Ordering::Greater => Ok(Edge { a: v, b: u }),
            std::cmp::Ordering::Equal => Err(NcsError::SelfLoop(u.0)),
        }
    }

    /// Panicking shorthand for literals in tests and fixtures.
    pub fn of(u: usize, v: usize) -> Self {
        Edge::new(u, v).expect("self-loop")
    }

    pub fn a(self) -> NodeId {
        self.a
    }

    pub fn b(self) -> NodeId {
        self.b
    }

    pub fn endpoints(self) -> (usize, usize) {
        (self.a.0, self.b.0)
    }

    pub fn touches(self, v: NodeId) -> bool {
        self.a == v || self.b == v
    }

    pub fn other(self, v: NodeId) -> NodeId {
        if self.a == v {
            self.b
        } else {
            self.a
        }
    }
}

impl Serialize for Edge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.a.0, self.b.0].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Edge {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [u, v] = <[usize; 2]>::deserialize(d)?;
        Edge::new(u, v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

/// Ordered node sequence from a source to a sink.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    pub nodes: Vec<NodeId>,
}

impl Path {
    pub fn source(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn sink(&self) -> NodeId {
        *self.nodes.last().expect("empty path")
    }

    pub fn len(&self) -> usize {
        self.nodes.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.nodes.windows(2).map(|w| Edge::of(w[0].0, w[1].0))
    }

    /// Consecutive (from, to) steps in travel order.
    pub fn hops(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes.windows(2).map(|w| (w[0], w[1]))
    }
}

/// Undirected graph of synchronization sessions for one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcsGraph {
    node_count: usize,
    edges: Vec<Edge>,
    index: HashMap<Edge, usize>,
    // (neighbor, edge index), ascending by neighbor
    adjacency: Vec<Vec<(NodeId, usize)>>,
}

impl NcsGraph {
    pub fn new(node_count: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        if node_count == 0 {
            return Err(NcsError::TooFewNodes {
                required: 1,
                actual: 0,
            });
        }
        let mut set = BTreeSet::new();
        for e in edges {
            if e.b.0 >= node_count {
                return Err(NcsError::NodeOutOfRange {
                    node: e.b.0,
                    node_count,
                });
            }
            if !set.insert(e) {
                return Err(NcsError::DuplicateEdge(e));
            }
        }
        let edges: Vec<Edge> = set.into_iter().collect();
        let index = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let mut adjacency = vec![Vec::new(); node_count];
        for (i, e) in edges.iter().enumerate() {
            adjacency[e.a.0].push((e.b, i));
            adjacency[e.b.0].push((e.a, i));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(NcsGraph {
            node_count,
            edges,
            index,
            adjacency,
        })
    }

    /// Builds a graph from raw endpoint pairs in any orientation.
    pub fn from_pairs(node_count: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let edges = pairs
            .iter()
            .map(|&(u, v)| Edge::new(u, v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(node_count, edges)
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| Edge::of(a, b)));
        Self::new(n, edges).expect("complete graph")
    }

    /// Star centred on the reference node.
    pub fn star(n: usize) -> Self {
        Self::new(n, (1..n).map(|b| Edge::of(0, b))).expect("star graph")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 nodes");
        Self::new(n, (0..n).map(|i| Edge::of(i, (i + 1) % n))).expect("cycle graph")
    }

    pub fn path_graph(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| Edge::of(i - 1, i))).expect("path graph")
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical sorted order; this order defines row order everywhere.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.node_count).map(NodeId)
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.index.contains_key(&e)
    }

    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        self.index.get(&e).copied()
    }

    pub fn neighbors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adjacency[v.0].iter().map(|&(n, _)| n)
    }

    pub(crate) fn incident(&self, v: NodeId) -> &[(NodeId, usize)] {
        &self.adjacency[v.0]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v.0].len()
    }

    pub fn min_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if v.0 < self.node_count {
            Ok(())
        } else {
            Err(NcsError::NodeOutOfRange {
                node: v.0,
                node_count: self.node_count,
            })
        }
    }

    /// Subgraph on the same node set with `removed` deleted.
    pub fn without_edges(&self, removed: &BTreeSet<Edge>) -> Result<Self> {
        if let Some(e) = removed.iter().find(|e| !self.contains_edge(**e)) {
            return Err(NcsError::EdgeNotInGraph(*e));
        }
        Self::new(
            self.node_count,
            self.edges.iter().copied().filter(|e| !removed.contains(e)),
        )
    }

    pub fn is_connected(&self) -> bool {
        self.reachable_count(NodeId::REFERENCE, |_| false) == self.node_count
    }

    pub fn is_connected_after_removal(&self, removed: &BTreeSet<Edge>) -> Result<bool> {
        if let Some(e) = removed.iter().find(|e| !self.contains_edge(**e)) {
            return Err(NcsError::EdgeNotInGraph(*e));
        }
        let mask: Vec<bool> = self.edges.iter().map(|e| removed.contains(e)).collect();
        Ok(self.reachable_count(NodeId::REFERENCE, |i| mask[i]) == self.node_count)
    }

    /// Connectivity test with edges skipped by index; used by hot enumeration loops.
    pub(crate) fn connected_skipping(&self, skip: &[bool]) -> bool {
        self.reachable_count(NodeId::REFERENCE, |i| skip[i]) == self.node_count
    }

    pub fn reachable_from(&self, start: NodeId, removed: &BTreeSet<Edge>) -> Vec<bool> {
        let mask: Vec<bool> = self.edges.iter().map(|e| removed.contains(e)).collect();
        self.bfs(start, |i| mask[i])
    }

    fn reachable_count(&self, start: NodeId, skip: impl Fn(usize) -> bool) -> usize {
        self.bfs(start, skip).into_iter().filter(|&s| s).count()
    }

    fn bfs(&self, start: NodeId, skip: impl Fn(usize) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.node_count];
        let mut queue = VecDeque::from([start]);
        seen[start.0] = true;
        while let Some(u) = queue.pop_front() {
            for &(v, ei) in &self.adjacency[u.0] {
                if !seen[v.0] && !skip(ei) {
                    seen[v.0] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// Maximum set of pairwise edge-disjoint `s`-`t` paths.
    pub fn max_edge_disjoint_paths(&self, s: NodeId, t: NodeId) -> Result<DisjointPaths> {
        self.check_pair(s, t)?;
        Ok(flow::UnitFlow::run(self, s, t, usize::MAX).decompose())
    }

    /// A minimum set of edges separating `s` from `t`.
    pub fn min_edge_cut(&self, s: NodeId, t: NodeId) -> Result<Vec<Edge>> {
        self.check_pair(s, t)?;
        Ok(flow::UnitFlow::run(self, s, t, usize::MAX).min_cut())
    }

    /// Global edge connectivity, fixing the reference node as one endpoint.
    pub fn edge_connectivity(&self) -> Result<usize> {
        self.edge_connectivity_with_cut().map(|(lambda, _)| lambda)
    }

    /// Edge connectivity together with one minimum cut that attains it.
    pub fn edge_connectivity_with_cut(&self) -> Result<(usize, Vec<Edge>)> {
        if self.node_count < 2 {
            return Err(NcsError::TooFewNodes {
                required: 2,
                actual: self.node_count,
            });
        }
        let mut best: Option<(usize, Vec<Edge>)> = None;
        for t in 1..self.node_count {
            let flow = flow::UnitFlow::run(self, NodeId::REFERENCE, NodeId(t), usize::MAX);
            if best.as_ref().is_none_or(|(v, _)| flow.value() < *v) {
                best = Some((flow.value(), flow.min_cut()));
                if flow.value() == 0 {
                    break;
                }
            }
        }
        Ok(best.expect("at least one sink"))
    }

    /// True iff `edge_connectivity() >= threshold`, stopping each flow early.
    pub fn edge_connectivity_at_least(&self, threshold: usize) -> bool {
        if threshold == 0 {
            return true;
        }
        if self.node_count < 2 || self.min_degree() < threshold {
            return false;
        }
        (1..self.node_count).all(|t| {
            flow::UnitFlow::run(self, NodeId::REFERENCE, NodeId(t), threshold).value() >= threshold
        })
    }

    fn check_pair(&self, s: NodeId, t: NodeId) -> Result<()> {
        self.check_node(s)?;
        self.check_node(t)?;
        if s == t {
            return Err(NcsError::SameEndpoints(s));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(edges: &[(usize, usize)]) -> BTreeSet<Edge> {
        edges.iter().map(|&(a, b)| Edge::of(a, b)).collect()
    }

    #[test]
    fn edge_is_canonical() {
        let e = Edge::new(3, 1).unwrap();
        assert_eq!(e.endpoints(), (1, 3));
        assert_eq!(Edge::new(2, 2), Err(NcsError::SelfLoop(2)));
    }

    #[test]
    fn construction_rejects_bad_edges() {
        assert!(matches!(
            NcsGraph::from_pairs(3, &[(0, 1), (1, 0)]),
            Err(NcsError::DuplicateEdge(_))
        ));
        assert!(matches!(
            NcsGraph::from_pairs(3, &[(0, 3)]),
            Err(NcsError::NodeOutOfRange {
                node: 3,
                node_count: 3
            })
        ));
        assert!(NcsGraph::new(0, []).is_err());
    }

    #[test]
    fn connectivity_basics() {
        assert!(NcsGraph::complete(4).is_connected());
        assert!(!NcsGraph::new(2, []).unwrap().is_connected());
        assert!(NcsGraph::new(1, []).unwrap().is_connected());
    }

    #[test]
    fn connectivity_after_removal() {
        let k4 = NcsGraph::complete(4);
        assert!(k4
            .is_connected_after_removal(&set(&[(0, 1), (0, 2)]))
            .unwrap());
        assert!(!k4
            .is_connected_after_removal(&set(&[(0, 1), (0, 2), (0, 3)]))
            .unwrap());
        let k3 = NcsGraph::complete(3);
        assert!(!k3
            .is_connected_after_removal(&set(&[(0, 1), (0, 2)]))
            .unwrap());
        let path = NcsGraph::path_graph(3);
        assert_eq!(
            path.is_connected_after_removal(&set(&[(0, 2)])),
            Err(NcsError::EdgeNotInGraph(Edge::of(0, 2)))
        );
    }

    #[test]
    fn disjoint_paths_simple_cases() {
        let k4 = NcsGraph::complete(4);
        let dp = k4.max_edge_disjoint_paths(NodeId(0), NodeId(3)).unwrap();
        assert_eq!(dp.count, 3);

        let p = NcsGraph::path_graph(3);
        let dp = p.max_edge_disjoint_paths(NodeId(0), NodeId(2)).unwrap();
        assert_eq!(dp.count, 1);
        assert_eq!(dp.paths[0].nodes, vec![NodeId(0), NodeId(1), NodeId(2)]);

        assert_eq!(
            k4.max_edge_disjoint_paths(NodeId(1), NodeId(1)),
            Err(NcsError::SameEndpoints(NodeId(1)))
        );
    }

    #[test]
    fn disjoint_paths_in_disconnected_graph() {
        let g = NcsGraph::from_pairs(4, &[(0, 1), (2, 3)]).unwrap();
        let dp = g.max_edge_disjoint_paths(NodeId(0), NodeId(3)).unwrap();
        assert_eq!(dp.count, 0);
        assert!(dp.paths.is_empty());
        assert!(g.min_edge_cut(NodeId(0), NodeId(3)).unwrap().is_empty());
    }

    #[test]
    fn min_cut_examples() {
        let k3 = NcsGraph::complete(3);
        let cut = k3.min_edge_cut(NodeId(0), NodeId(1)).unwrap();
        assert_eq!(cut.len(), 2);
        let star = NcsGraph::star(5);
        assert_eq!(star.min_edge_cut(NodeId(1), NodeId(2)).unwrap().len(), 1);
        let k5 = NcsGraph::complete(5);
        assert_eq!(k5.min_edge_cut(NodeId(2), NodeId(4)).unwrap().len(), 4);
    }

    #[test]
    fn edge_connectivity_examples() {
        for n in 2..=9 {
            assert_eq!(NcsGraph::complete(n).edge_connectivity().unwrap(), n - 1);
        }
        for n in 3..=8 {
            assert_eq!(NcsGraph::cycle(n).edge_connectivity().unwrap(), 2);
        }
        assert_eq!(NcsGraph::star(6).edge_connectivity().unwrap(), 1);
        assert_eq!(
            NcsGraph::new(3, []).unwrap().edge_connectivity().unwrap(),
            0
        );
        assert!(matches!(
            NcsGraph::new(1, []).unwrap().edge_connectivity(),
            Err(NcsError::TooFewNodes { .. })
        ));
    }

    #[test]
    fn capped_connectivity_agrees() {
        let g = NcsGraph::cycle(6);
        assert!(g.edge_connectivity_at_least(0));
        assert!(g.edge_connectivity_at_least(2));
        assert!(!g.edge_connectivity_at_least(3));
    }

    #[test]
    fn path_hops_and_edges() {
        let p = Path {
            nodes: vec![NodeId(0), NodeId(3), NodeId(1)],
        };
        assert_eq!(p.len(), 2);
        assert_eq!(
            p.edges().collect::<Vec<_>>(),
            vec![Edge::of(0, 3), Edge::of(1, 3)]
        );
    }
}
