use thiserror::Error;

use crate::graph::{Edge, NodeId};

/// Errors raised by graph construction, solvers and the planning routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NcsError {
    #[error("graph must have at least {required} node(s), got {actual}")]
    TooFewNodes { required: usize, actual: usize },

    #[error("node {node} is out of range for a graph with {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },

    #[error("self-loop on node {0} is not a valid synchronization session")]
    SelfLoop(usize),

    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),

    #[error("edge {0} is not part of the graph")]
    EdgeNotInGraph(Edge),

    #[error("source and sink must differ (both {0})")]
    SameEndpoints(NodeId),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("measurement set does not match the graph edges: {0}")]
    MeasurementMismatch(String),

    #[error("clock state has {actual} offsets, expected {expected}")]
    OffsetLengthMismatch { expected: usize, actual: usize },

    #[error("fault on edge {0} must be nonzero")]
    ZeroFault(Edge),

    #[error("fault count {count} exceeds the {edges} available edges")]
    TooManyFaults { count: usize, edges: usize },

    #[error(
        "voting tie for node {node}: {tied} candidate values share the top frequency {frequency}"
    )]
    Ambiguous {
        node: NodeId,
        tied: usize,
        frequency: usize,
    },

    #[error("no fault distribution yields a unique solution")]
    NoSolutionFound,

    #[error("least-squares system is rank deficient")]
    Underdetermined,

    #[error("{nodes}-node graphs cannot be {k}-resilient (needs 2k+1 <= n-1)")]
    Infeasible { nodes: usize, k: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = NcsError> = std::result::Result<T, E>;
