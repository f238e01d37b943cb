//! Graph file formats: a JSON object `{"nodes": N, "edges": [[a, b], ...]}`
//! or a plain edge list with one `a b` pair per line.

use serde::{Deserialize, Serialize};

use super::{Edge, NcsGraph};
use crate::error::{NcsError, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub nodes: usize,
    pub edges: Vec<[usize; 2]>,
}

impl GraphDoc {
    pub fn from_graph(g: &NcsGraph) -> Self {
        GraphDoc {
            nodes: g.node_count(),
            edges: g.edges().iter().map(|e| [e.a.0, e.b.0]).collect(),
        }
    }

    pub fn into_graph(self) -> Result<NcsGraph> {
        let edges = self
            .edges
            .iter()
            .map(|&[a, b]| Edge::new(a, b))
            .collect::<Result<Vec<_>>>()?;
        NcsGraph::new(self.nodes, edges)
    }
}

/// Parses either format, picking JSON when the first non-blank byte is `{`.
pub fn parse_graph(text: &str) -> Result<NcsGraph> {
    if text.trim_start().starts_with('{') {
        parse_graph_json(text)
    } else {
        parse_edge_list(text)
    }
}

pub fn parse_graph_json(text: &str) -> Result<NcsGraph> {
    let doc: GraphDoc =
        serde_json::from_str(text).map_err(|e| NcsError::Parse(format!("graph json: {e}")))?;
    doc.into_graph()
}

/// Edge list; blank lines and `#` comments are skipped, node count is max id + 1.
pub fn parse_edge_list(text: &str) -> Result<NcsGraph> {
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = || NcsError::Parse(format!("line {}: expected `a b`, got {line:?}", lineno + 1));
        let mut it = line.split_whitespace();
        let a: usize = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let b: usize = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if it.next().is_some() {
            return Err(bad());
        }
        pairs.push((a, b));
    }
    let n = pairs.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
    if n == 0 {
        return Err(NcsError::Parse("edge list is empty".into()));
    }
    NcsGraph::from_pairs(n, &pairs)
}

pub fn to_json(g: &NcsGraph) -> serde_json::Value {
    serde_json::to_value(GraphDoc::from_graph(g)).expect("graph doc serializes")
}
