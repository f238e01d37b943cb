//! Unit-capacity max-flow on the directed doubling of an undirected graph.
//!
//! Each undirected edge carries a net flow in {-1, 0, +1} measured in its
//! canonical `a -> b` direction. Pushing against existing flow cancels it, so
//! no undirected edge ever carries flow both ways and the decomposition
//! yields edge-disjoint paths.

use std::collections::VecDeque;

use super::{Edge, NcsGraph, NodeId, Path};

/// Result of a maximum edge-disjoint path computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjointPaths {
    pub count: usize,
    pub paths: Vec<Path>,
}

pub(super) struct UnitFlow<'g> {
    g: &'g NcsGraph,
    s: NodeId,
    t: NodeId,
    net: Vec<i8>,
    value: usize,
}

impl<'g> UnitFlow<'g> {
    /// Augments along BFS-shortest paths until none remain or `cap` is reached.
    pub(super) fn run(g: &'g NcsGraph, s: NodeId, t: NodeId, cap: usize) -> Self {
        let mut flow = UnitFlow {
            g,
            s,
            t,
            net: vec![0; g.edge_count()],
            value: 0,
        };
        while flow.value < cap && flow.augment() {
            flow.value += 1;
        }
        flow
    }

    pub(super) fn value(&self) -> usize {
        self.value
    }

    /// Flow currently leaving `u` along edge `ei` (towards its other endpoint).
    fn out_flow(&self, u: NodeId, ei: usize) -> i8 {
        let e = self.g.edges[ei];
        if e.a == u {
            self.net[ei]
        } else {
            -self.net[ei]
        }
    }

    fn push(&mut self, u: NodeId, ei: usize) {
        let e = self.g.edges[ei];
        self.net[ei] += if e.a == u { 1 } else { -1 };
    }

    fn augment(&mut self) -> bool {
        let n = self.g.node_count();
        let mut pred: Vec<Option<(NodeId, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[self.s.0] = true;
        let mut queue = VecDeque::from([self.s]);
        while let Some(u) = queue.pop_front() {
            for &(v, ei) in self.g.incident(u) {
                if seen[v.0] || self.out_flow(u, ei) >= 1 {
                    continue;
                }
                seen[v.0] = true;
                pred[v.0] = Some((u, ei));
                if v == self.t {
                    let mut cur = v;
                    while let Some((p, pe)) = pred[cur.0] {
                        self.push(p, pe);
                        cur = p;
                    }
                    return true;
                }
                queue.push_back(v);
            }
        }
        false
    }

    /// Nodes reachable from the source in the residual graph.
    fn source_side(&self) -> Vec<bool> {
        let mut seen = vec![false; self.g.node_count()];
        seen[self.s.0] = true;
        let mut queue = VecDeque::from([self.s]);
        while let Some(u) = queue.pop_front() {
            for &(v, ei) in self.g.incident(u) {
                if !seen[v.0] && self.out_flow(u, ei) < 1 {
                    seen[v.0] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    pub(super) fn min_cut(&self) -> Vec<Edge> {
        let side = self.source_side();
        self.g
            .edges
            .iter()
            .copied()
            .filter(|e| side[e.a.0] != side[e.b.0])
            .collect()
    }

    /// Splits the flow into `value` edge-disjoint simple paths, walking from the
    /// source through the lowest-numbered neighbour that still carries flow.
    /// Circulations met on the way are discarded.
    pub(super) fn decompose(mut self) -> DisjointPaths {
        let mut paths = Vec::with_capacity(self.value);
        for _ in 0..self.value {
            let mut nodes = vec![self.s];
            let mut pos = vec![usize::MAX; self.g.node_count()];
            pos[self.s.0] = 0;
            let mut cur = self.s;
            while cur != self.t {
                let &(next, ei) = self
                    .g
                    .incident(cur)
                    .iter()
                    .find(|&&(_, ei)| self.out_flow(cur, ei) == 1)
                    .expect("flow conservation");
                // consume the unit on this edge
                self.push(next, ei);
                if pos[next.0] != usize::MAX {
                    // closed a cycle: drop it, the flow on it is already consumed
                    let keep = pos[next.0] + 1;
                    for v in nodes.drain(keep..) {
                        pos[v.0] = usize::MAX;
                    }
                } else {
                    pos[next.0] = nodes.len();
                    nodes.push(next);
                }
                cur = next;
            }
            paths.push(Path { nodes });
        }
        DisjointPaths {
            count: self.value,
            paths,
        }
    }
}
